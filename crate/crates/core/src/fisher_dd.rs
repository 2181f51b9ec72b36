//! Driven-dissipative steady state and its Fisher information.
//!
//! A coherent drive `η` at frequency `ω_d` with loss rate `κ` on the
//! Bogoliubov mode of the squeezing Hamiltonian leaves the cavity in
//! `S(ξ) D(β(t)) |0⟩` with
//!
//! ```text
//! ω̃ = ω e^{2ξ},  |α̃| = 2η/√(κ² + 4(ω̃ − ω_d)²),
//! ϕ_d = atan2(κ, 2(ω_d − ω̃)),  β(t) = |α̃| e^{−i(ω_d t + ϕ_d)}.
//! ```
//!
//! At resonance `ϕ_d = π/2`. [`PhaseConvention::Zero`] subtracts that
//! constant so the drive phase vanishes on resonance; the Ω-dependence of
//! ϕ_d (and so every Fisher information) is unchanged.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle;
use crate::error::{domain, Result};
use crate::fisher_closed::{
    cfi_for_state, critical_term, optimize_for_state, CfiResult, QfiBreakdown,
};
use crate::gaussian::{quad_mean, quad_variance, GaussianPureState, QuadratureSpec};
use crate::model::{ClosedParams, Diagnostic};

/// Allowed `|ω_d − ω̃|` in units of κ before the resonant closed forms are
/// flagged.
pub const RESONANCE_GUARD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseConvention {
    /// `ϕ_d = atan2(κ, 2(ω_d − ω̃))`, π/2 on resonance.
    #[default]
    Arctan,
    /// `ϕ_d − π/2`, zero on resonance.
    Zero,
}

impl std::str::FromStr for PhaseConvention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "arctan" => Ok(PhaseConvention::Arctan),
            "zero" => Ok(PhaseConvention::Zero),
            other => Err(format!("unknown phase convention '{other}' (arctan|zero)")),
        }
    }
}

impl std::fmt::Display for PhaseConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhaseConvention::Arctan => "arctan",
            PhaseConvention::Zero => "zero",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrivenDissipativeParams {
    /// ω, Ω and g; γ and α are ignored.
    pub base: ClosedParams,
    pub eta: f64,
    pub kappa: f64,
    pub omega_d: f64,
    /// Observation time.
    pub t: f64,
    #[serde(default)]
    pub phase_convention: PhaseConvention,
}

impl DrivenDissipativeParams {
    pub fn new(
        base: ClosedParams,
        eta: f64,
        kappa: f64,
        omega_d: f64,
        t: f64,
        phase_convention: PhaseConvention,
    ) -> Result<Self> {
        let p = DrivenDissipativeParams {
            base,
            eta,
            kappa,
            omega_d,
            t,
            phase_convention,
        };
        p.validate()?;
        Ok(p)
    }

    /// Drive exactly on the dressed resonance `ω_d = ω̃`.
    pub fn resonant(
        base: ClosedParams,
        eta: f64,
        kappa: f64,
        t: f64,
        phase_convention: PhaseConvention,
    ) -> Result<Self> {
        base.validate()?;
        let wd = dressed_frequency(&base);
        Self::new(base, eta, kappa, wd, t, phase_convention)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(domain("drive strength eta must be finite and non-negative"));
        }
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(domain("loss rate kappa must be positive"));
        }
        if !(self.omega_d > 0.0) || !self.omega_d.is_finite() {
            return Err(domain("drive frequency must be positive"));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(domain("observation time must be finite and non-negative"));
        }
        Ok(())
    }

    pub fn at_time(&self, t: f64) -> Result<Self> {
        let p = DrivenDissipativeParams { t, ..*self };
        p.validate()?;
        Ok(p)
    }

    /// `ω̃ − ω_d`.
    pub fn detuning(&self) -> f64 {
        dressed_frequency(&self.base) - self.omega_d
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = self.base.diagnostics();
        // the ramp-phase remark is irrelevant for the steady state
        out.retain(|d| !matches!(d, Diagnostic::PhaseApproximation { .. }));
        let guard = RESONANCE_GUARD * self.kappa;
        let det = self.detuning().abs();
        if det > guard {
            out.push(Diagnostic::OffResonance {
                detuning: det,
                guard,
            });
        }
        out
    }

    /// Total phase `ω_d t + ϕ_d` of the steady-state displacement.
    pub fn drive_phase(&self) -> f64 {
        self.omega_d * self.t + self.phi_d()
    }

    pub fn phi_d(&self) -> f64 {
        let raw = self.kappa.atan2(-2.0 * self.detuning());
        match self.phase_convention {
            PhaseConvention::Arctan => raw,
            PhaseConvention::Zero => raw - FRAC_PI_2,
        }
    }

    /// Steady-state amplitude `|α̃|`.
    pub fn amplitude(&self) -> f64 {
        let d = self.detuning();
        2.0 * self.eta / (self.kappa * self.kappa + 4.0 * d * d).sqrt()
    }
}

/// `ω̃ = ω e^{2ξ} = ω √(1 − g²/g_c²)`.
pub fn dressed_frequency(base: &ClosedParams) -> f64 {
    base.omega * base.gap_factor().sqrt()
}

pub fn steady_state(params: &DrivenDissipativeParams) -> Result<GaussianPureState> {
    params.validate()?;
    GaussianPureState::new(params.base.xi(), params.amplitude(), -params.drive_phase())
}

/// Ω-derivatives `(∂ξ, ∂|α̃|, ∂arg β)` of the steady state, valid at any
/// detuning.
pub fn steady_state_derivatives(params: &DrivenDissipativeParams) -> Result<(f64, f64, f64)> {
    params.validate()?;
    let b = &params.base;
    let gain = b.squeeze_gain();
    let dxi = gain / (4.0 * b.splitting);
    let dwt = dressed_frequency(b) * gain / (2.0 * b.splitting);
    let d = params.detuning();
    let den = params.kappa * params.kappa + 4.0 * d * d;
    let dmag = -8.0 * params.eta * d * dwt / den.powf(1.5);
    let dphi_d = 2.0 * params.kappa * dwt / den;
    Ok((dxi, dmag, -dphi_d))
}

/// Resonant-drive QFI components.
pub fn qfi_dd(params: &DrivenDissipativeParams) -> Result<QfiBreakdown> {
    params.validate()?;
    let b = &params.base;
    let r = b.coupling_ratio();
    let r4 = r.powi(4);
    let gap = b.gap_factor();
    let (eta, kappa, om) = (params.eta, params.kappa, b.splitting);
    let phase = 16.0 * r4 * (b.omega * eta / (kappa * kappa * om)).powi(2) / gap;
    let amp = 2.0 * eta / kappa;
    let critical = critical_term(b, 2.0 * amp * amp);
    let interference = 8.0 * r4 * b.omega * eta * eta * (2.0 * params.drive_phase()).sin()
        / (kappa.powi(3) * gap.powf(1.5) * om * om);
    QfiBreakdown::new(phase, critical, interference)
}

/// Mean and variance of the quadrature at angle θ in the steady state.
pub fn dd_quad_stats(params: &DrivenDissipativeParams, theta: f64) -> Result<(f64, f64)> {
    let s = steady_state(params)?;
    let spec = QuadratureSpec::new(theta);
    Ok((quad_mean(&s, spec), quad_variance(&s, spec)))
}

fn resonant_common(params: &DrivenDissipativeParams) -> Result<(f64, f64, f64, f64)> {
    params.validate()?;
    let b = &params.base;
    let gain = b.squeeze_gain();
    let om2 = b.splitting * b.splitting;
    let pre = (params.eta * gain).powi(2) / (params.kappa.powi(4) * om2);
    let (s, c) = params.drive_phase().sin_cos();
    Ok((pre, gain * gain / (8.0 * om2), s, c))
}

/// Resonant closed form of the X-quadrature Fisher information.
pub fn cfi_dd_x(params: &DrivenDissipativeParams) -> Result<CfiResult> {
    let (pre, var_term, s, c) = resonant_common(params)?;
    let wt = dressed_frequency(&params.base);
    let br = params.kappa * c + 4.0 * wt * s;
    Ok(CfiResult {
        theta: 0.0,
        mean_term: pre * br * br,
        variance_term: var_term,
        total: pre * br * br + var_term,
    })
}

/// Resonant closed form of the P-quadrature Fisher information.
pub fn cfi_dd_p(params: &DrivenDissipativeParams) -> Result<CfiResult> {
    let (pre, var_term, s, c) = resonant_common(params)?;
    let wt = dressed_frequency(&params.base);
    let br = params.kappa * s + 4.0 * wt * c;
    Ok(CfiResult {
        theta: FRAC_PI_2,
        mean_term: pre * br * br,
        variance_term: var_term,
        total: pre * br * br + var_term,
    })
}

/// Quadrature Fisher information at angle θ via the Gaussian chain rule.
pub fn cfi_dd_quadrature(params: &DrivenDissipativeParams, theta: f64) -> Result<CfiResult> {
    let s = steady_state(params)?;
    let d = steady_state_derivatives(params)?;
    cfi_for_state(&s, d, QuadratureSpec::new(theta))
}

pub fn optimize_dd_angle(params: &DrivenDissipativeParams) -> Result<(f64, CfiResult)> {
    let s = steady_state(params)?;
    let d = steady_state_derivatives(params)?;
    optimize_for_state(&s, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub t: f64,
    /// Optimal angle in `[0, π)`.
    pub theta_star: f64,
    /// Same angle with π-jumps removed along the trace.
    pub theta_unwrapped: f64,
    pub cfi: CfiResult,
    pub qfi: QfiBreakdown,
}

/// Optimal quadrature angle and the resulting Fisher information along a
/// time grid. Points are evaluated in parallel and returned in grid order.
pub fn optimal_angle_trace(
    params: &DrivenDissipativeParams,
    t_grid: &[f64],
) -> Result<Vec<TracePoint>> {
    if t_grid.is_empty() {
        return Err(domain("time grid is empty"));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain("time grid must be strictly increasing"));
    }
    let rows: Vec<(f64, f64, CfiResult, QfiBreakdown)> = t_grid
        .par_iter()
        .map(|&t| {
            let p = params.at_time(t)?;
            let (th, cfi) = optimize_dd_angle(&p)?;
            Ok((t, th, cfi, qfi_dd(&p)?))
        })
        .collect::<Result<_>>()?;
    let raw: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let unwrapped = angle::unwrap_pi(&raw);
    Ok(rows
        .into_iter()
        .zip(unwrapped)
        .map(|((t, theta_star, cfi, qfi), theta_unwrapped)| TracePoint {
            t,
            theta_star,
            theta_unwrapped,
            cfi,
            qfi,
        })
        .collect())
}
