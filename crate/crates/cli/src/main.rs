use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use critmetro_cli::config::{Mode, ScanConfig};
use critmetro_cli::output::write_atomic;
use critmetro_cli::verify::{self, Level};
use critmetro_cli::{run_scan, to_csv};
use critmetro_core::fisher_closed::{
    cfi_quadrature, optimize_quadrature_angle, qfi_breakdown_at_phase,
};
use critmetro_core::fisher_dd::{cfi_dd_quadrature, optimize_dd_angle, qfi_dd, steady_state};
use critmetro_core::model::accumulated_phase;
use critmetro_core::PhaseConvention;

#[derive(Parser)]
#[command(
    name = "critmetro",
    version,
    about = "Fisher information of critical and phase-encoding metrology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep g/g_c for the closed protocol.
    ScanClosed(Flags),
    /// Sweep time for the driven-dissipative steady state.
    ScanDd(Flags),
    /// Evaluate all quantities at a single point.
    Point(Flags),
    /// Best quadrature angle at a single point.
    OptimizeAngle(Flags),
    /// Run the oracle suite.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
        /// Write the certificates as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// JSON config; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long = "Omega")]
    splitting: Option<f64>,
    #[arg(long)]
    g_over_gc: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    alpha_mag: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_arg: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    omega_d: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Evaluation time for `point` and `optimize-angle` in driven mode.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    phase_convention: Option<PhaseConvention>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn resolve(&self, default_mode: Mode) -> Result<ScanConfig> {
        let mut c = match &self.config {
            Some(p) => ScanConfig::load(p)?,
            None => ScanConfig::default_for(self.mode.unwrap_or(default_mode)),
        };
        if let Some(m) = self.mode {
            if m != c.mode {
                c.sweep = ScanConfig::default_for(m).sweep;
            }
            c.mode = m;
        }
        macro_rules! set {
            ($($f:ident => $g:ident),*) => { $( if let Some(v) = self.$f { c.$g = v; } )* };
        }
        set!(omega => omega, splitting => splitting, g_over_gc => g_over_gc, gamma => gamma,
             alpha_mag => alpha_mag, alpha_arg => alpha_arg, eta => eta, kappa => kappa,
             phase_convention => phase_convention);
        macro_rules! set_opt {
            ($($f:ident),*) => { $( if self.$f.is_some() { c.$f = self.$f; } )* };
        }
        set_opt!(omega_d, t_max, start, stop, points);
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        Ok(c)
    }
}

/// Print model-validity warnings for the given couplings, each once.
fn warn_diagnostics(c: &ScanConfig, ratios: &[f64]) {
    let mut seen = Vec::new();
    for &r in ratios {
        let diags = match c.mode {
            Mode::Closed => c.closed_params(r).map(|p| p.diagnostics()),
            Mode::DrivenDissipative => c.dd_params(0.0).map(|p| p.diagnostics()),
        };
        for d in diags.unwrap_or_default() {
            let line = d.to_string();
            if !seen.contains(&line) {
                eprintln!("warning: {line}");
                seen.push(line);
            }
        }
    }
}

fn scan(flags: &Flags, mode: Mode, command: &str) -> Result<()> {
    let c = flags.resolve(mode)?;
    if c.mode != mode {
        bail!("{command} runs in mode {mode:?}, config says {:?}", c.mode);
    }
    c.validate()?;
    let (start, stop, _) = c.range()?;
    warn_diagnostics(&c, &[start, stop]);
    let table = run_scan(&c)?;
    let bytes = to_csv(command, &c, &table)?;
    match &c.out {
        Some(p) => write_atomic(p, &bytes)?,
        None => print!("{}", String::from_utf8(bytes)?),
    }
    Ok(())
}

fn point(flags: &Flags, optimize_only: bool) -> Result<()> {
    let c = flags.resolve(Mode::Closed)?;
    warn_diagnostics(&c, &[c.g_over_gc]);
    let v = match c.mode {
        Mode::Closed => {
            let p = c.closed_params(c.g_over_gc)?;
            let phi = accumulated_phase(p.g, &p)?;
            let (th, opt) = optimize_quadrature_angle(&p, phi)?;
            if optimize_only {
                json!({"theta_opt": th, "cfi_opt": opt})
            } else {
                json!({
                    "params": p,
                    "xi": p.xi(),
                    "phi": phi,
                    "qfi": qfi_breakdown_at_phase(&p, phi)?,
                    "cfi_X": cfi_quadrature(&p, phi, 0.0)?,
                    "cfi_P": cfi_quadrature(&p, phi, std::f64::consts::FRAC_PI_2)?,
                    "cfi_opt": opt,
                    "theta_opt": th,
                })
            }
        }
        Mode::DrivenDissipative => {
            let p = c.dd_params(flags.t.unwrap_or(0.0))?;
            let (th, opt) = optimize_dd_angle(&p)?;
            if optimize_only {
                json!({"theta_opt": th, "cfi_opt": opt})
            } else {
                json!({
                    "params": p,
                    "state": steady_state(&p)?,
                    "qfi": qfi_dd(&p)?,
                    "cfi_X": cfi_dd_quadrature(&p, 0.0)?,
                    "cfi_P": cfi_dd_quadrature(&p, std::f64::consts::FRAC_PI_2)?,
                    "cfi_opt": opt,
                    "theta_opt": th,
                })
            }
        }
    };
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

fn run_verify(level: Level, out: Option<&PathBuf>) -> Result<bool> {
    let certs = verify::run(level)?;
    for c in &certs {
        println!("{}", verify::report_line(c));
    }
    if let Some(p) = out {
        write_atomic(p, serde_json::to_string_pretty(&certs)?.as_bytes())?;
    }
    let failed = certs.iter().filter(|c| !c.passed).count();
    println!("{} checks, {} failed", certs.len(), failed);
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::ScanClosed(f) => scan(f, Mode::Closed, "scan-closed").map(|_| true),
        Command::ScanDd(f) => scan(f, Mode::DrivenDissipative, "scan-dd").map(|_| true),
        Command::Point(f) => point(f, false).map(|_| true),
        Command::OptimizeAngle(f) => point(f, true).map(|_| true),
        Command::Verify { level, out } => run_verify(*level, out.as_ref()),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
