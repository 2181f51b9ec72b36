use std::f64::consts::PI;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use critmetro_core::fisher_dd::dressed_frequency;
use critmetro_core::{ClosedParams, DrivenDissipativeParams, PhaseConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Closed,
    #[value(name = "driven_dissipative", alias = "dd")]
    DrivenDissipative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    GOverGc,
    Time,
}

/// Scan settings. Every field has a default so a config file may list only
/// what it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub mode: Mode,
    pub sweep: Sweep,
    /// Sweep range. For `g_over_gc` both ends are included and points are
    /// log-spaced in `1 − g/g_c`; for `time` the stop is excluded and points
    /// are uniform. `None` picks the mode default.
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    pub omega: f64,
    #[serde(rename = "Omega")]
    pub splitting: f64,
    /// Coupling for driven scans; closed scans sweep it.
    pub g_over_gc: f64,
    pub gamma: f64,
    pub alpha_mag: f64,
    pub alpha_arg: f64,
    pub eta: f64,
    pub kappa: f64,
    /// Drive frequency; defaults to the dressed resonance.
    pub omega_d: Option<f64>,
    /// Scan length in time; defaults to two drive periods.
    pub t_max: Option<f64>,
    pub phase_convention: PhaseConvention,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig::closed_default()
    }
}

/// Default closed grid: 512 points on `g/g_c ∈ [0.5, 0.9999]`.
pub const CLOSED_POINTS: usize = 512;
pub const CLOSED_START: f64 = 0.5;
pub const CLOSED_STOP: f64 = 0.9999;
pub const POINTS_PER_PERIOD: usize = 512;
pub const DEFAULT_PERIODS: usize = 2;

impl ScanConfig {
    pub fn closed_default() -> Self {
        ScanConfig {
            mode: Mode::Closed,
            sweep: Sweep::GOverGc,
            start: None,
            stop: None,
            points: None,
            omega: 1.0,
            splitting: 200.0,
            g_over_gc: 0.999,
            gamma: 1e-3,
            alpha_mag: 0.5,
            alpha_arg: -0.3,
            eta: 8.0,
            kappa: 1.0,
            omega_d: None,
            t_max: None,
            phase_convention: PhaseConvention::Arctan,
            out: None,
        }
    }

    pub fn dd_default() -> Self {
        ScanConfig {
            mode: Mode::DrivenDissipative,
            sweep: Sweep::Time,
            splitting: 100.5,
            ..ScanConfig::closed_default()
        }
    }

    pub fn default_for(mode: Mode) -> Self {
        match mode {
            Mode::Closed => Self::closed_default(),
            Mode::DrivenDissipative => Self::dd_default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: ScanConfig = serde_json::from_str(text).context("parsing config JSON")?;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json(&text)
    }

    /// Config echoed in a CSV header by a previous run.
    pub fn from_csv_header(csv: &str) -> Result<Self> {
        for line in csv.lines() {
            if let Some(rest) = line.strip_prefix("# config: ") {
                return Self::from_json(rest);
            }
            if !line.starts_with('#') {
                break;
            }
        }
        bail!("no '# config:' line in CSV header")
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("config is plain data")
    }

    pub fn closed_params(&self, ratio: f64) -> Result<ClosedParams> {
        Ok(ClosedParams::from_ratio(
            self.omega,
            self.splitting,
            ratio,
            self.gamma,
            self.alpha_mag,
            self.alpha_arg,
        )?)
    }

    pub fn dd_params(&self, t: f64) -> Result<DrivenDissipativeParams> {
        let base = self.closed_params(self.g_over_gc)?;
        let wd = self.omega_d.unwrap_or_else(|| dressed_frequency(&base));
        Ok(DrivenDissipativeParams::new(
            base,
            self.eta,
            self.kappa,
            wd,
            t,
            self.phase_convention,
        )?)
    }

    /// Drive frequency actually used by driven scans.
    pub fn drive_frequency(&self) -> Result<f64> {
        Ok(self.dd_params(0.0)?.omega_d)
    }

    pub fn range(&self) -> Result<(f64, f64, usize)> {
        match self.sweep {
            Sweep::GOverGc => Ok((
                self.start.unwrap_or(CLOSED_START),
                self.stop.unwrap_or(CLOSED_STOP),
                self.points.unwrap_or(CLOSED_POINTS),
            )),
            Sweep::Time => {
                let period = 2.0 * PI / self.drive_frequency()?;
                let stop = self
                    .stop
                    .or(self.t_max)
                    .unwrap_or(DEFAULT_PERIODS as f64 * period);
                let start = self.start.unwrap_or(0.0);
                let points = self.points.unwrap_or_else(|| {
                    ((stop - start) / period * POINTS_PER_PERIOD as f64).round() as usize
                });
                Ok((start, stop, points))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.mode, self.sweep) {
            (Mode::Closed, Sweep::GOverGc) | (Mode::DrivenDissipative, Sweep::Time) => {}
            (m, s) => bail!("sweep {s:?} is not available in mode {m:?}"),
        }
        let (start, stop, points) = self.range()?;
        if !(start < stop) {
            bail!("range start {start} must be below stop {stop}");
        }
        if points < 2 {
            bail!("need at least 2 points, got {points}");
        }
        match self.sweep {
            Sweep::GOverGc => {
                if start < 0.0 || stop >= 1.0 {
                    bail!("g/g_c range must lie in [0, 1)");
                }
                self.closed_params(stop)?;
            }
            Sweep::Time => {
                if start < 0.0 {
                    bail!("times must be non-negative");
                }
                self.dd_params(start)?;
            }
        }
        Ok(())
    }

    /// Sweep values in scan order.
    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let (start, stop, n) = self.range()?;
        Ok(match self.sweep {
            Sweep::GOverGc => log_gap_grid(start, stop, n),
            Sweep::Time => (0..n)
                .map(|i| start + (stop - start) * i as f64 / n as f64)
                .collect(),
        })
    }
}

/// `n` ratios from `start` to `stop` (inclusive) with `1 − r` geometric.
pub fn log_gap_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    let (a, b) = ((1.0 - start).ln(), (1.0 - stop).ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                start
            } else if i == n - 1 {
                stop
            } else {
                1.0 - (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
