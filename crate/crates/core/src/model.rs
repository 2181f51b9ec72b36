//! Model constants of the effective squeezing Hamiltonian
//! `H = ω a†a − (g²/4Ω)(a + a†)²` and the quantities derived from them:
//! critical coupling, squeezing parameter, the adiabatic ramp and the phase
//! accumulated along it.
//!
//! Frequencies are in units of the mode frequency ω and times in units of
//! 1/ω unless the caller chooses otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Couplings with `1 − g/g_c` below this are refused.
pub const CRITICAL_GUARD: f64 = 1e-12;

/// Below this `Ω/ω` the elimination of the two-level systems is questionable.
pub const DEFAULT_VALIDITY_RATIO: f64 = 10.0;

/// Below this `g_f/g_c` the closed-form accumulated phase is a poor
/// approximation of the exact ramp integral.
pub const PHASE_ACCURACY_RATIO: f64 = 0.5;

/// Geometric phase of the instantaneous eigenstates. They are real, so it
/// vanishes identically.
pub const BERRY_PHASE: f64 = 0.0;

/// Non-fatal remarks about the regime a parameter set lives in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Diagnostic {
    /// `Ω/ω` is below the elimination threshold.
    WeakSeparation { ratio: f64, threshold: f64 },
    /// The closed-form phase was derived for `g_f ≈ g_c`.
    PhaseApproximation { ratio: f64 },
    /// Driving too far from the dressed resonance.
    OffResonance { detuning: f64, guard: f64 },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::WeakSeparation { ratio, threshold } => write!(
                f,
                "Omega/omega = {ratio} < {threshold}: spin elimination not well justified"
            ),
            Diagnostic::PhaseApproximation { ratio } => write!(
                f,
                "g_f/g_c = {ratio} < {PHASE_ACCURACY_RATIO}: closed-form phase assumes g_f near g_c"
            ),
            Diagnostic::OffResonance { detuning, guard } => write!(
                f,
                "|omega_d - omega_tilde| = {detuning} exceeds {guard}: resonant closed forms extrapolated"
            ),
        }
    }
}

/// Constants of the closed (unitary) protocol plus the coupling at which
/// quantities are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedParams {
    /// Harmonic-mode frequency ω.
    pub omega: f64,
    /// Two-level splitting Ω, the parameter being estimated.
    #[serde(rename = "Omega")]
    pub splitting: f64,
    /// Coupling strength g (final ramp value when evaluating the protocol).
    pub g: f64,
    /// Dimensionless ramp rate γ ≪ 1.
    pub gamma: f64,
    /// |α| of the initial coherent state.
    pub alpha_mag: f64,
    /// arg α in radians.
    pub alpha_arg: f64,
}

impl ClosedParams {
    pub fn new(
        omega: f64,
        splitting: f64,
        g: f64,
        gamma: f64,
        alpha_mag: f64,
        alpha_arg: f64,
    ) -> Result<Self> {
        let p = ClosedParams {
            omega,
            splitting,
            g,
            gamma,
            alpha_mag,
            alpha_arg,
        };
        p.validate()?;
        Ok(p)
    }

    /// Build from the coupling ratio `g/g_c` instead of the absolute coupling.
    pub fn from_ratio(
        omega: f64,
        splitting: f64,
        ratio: f64,
        gamma: f64,
        alpha_mag: f64,
        alpha_arg: f64,
    ) -> Result<Self> {
        let gc = critical_coupling(omega, splitting)?;
        Self::new(omega, splitting, ratio * gc, gamma, alpha_mag, alpha_arg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !(self.splitting > 0.0) {
            return Err(domain("omega and Omega must be positive"));
        }
        if !(self.g >= 0.0) {
            return Err(domain("coupling g must be non-negative"));
        }
        if !(self.gamma > 0.0) {
            return Err(domain("ramp rate gamma must be positive"));
        }
        if !(self.alpha_mag >= 0.0) || !self.alpha_arg.is_finite() {
            return Err(domain("|alpha| must be non-negative and arg alpha finite"));
        }
        check_ratio(self.coupling_ratio())
    }

    /// Same constants, different evaluation coupling.
    pub fn with_coupling(&self, g: f64) -> Result<Self> {
        let p = ClosedParams { g, ..*self };
        p.validate()?;
        Ok(p)
    }

    pub fn with_ratio(&self, ratio: f64) -> Result<Self> {
        self.with_coupling(ratio * self.critical_coupling())
    }

    pub fn critical_coupling(&self) -> f64 {
        (self.splitting * self.omega).sqrt()
    }

    /// `g/g_c`.
    pub fn coupling_ratio(&self) -> f64 {
        self.g / self.critical_coupling()
    }

    /// `1 − g²/g_c²`, evaluated without cancellation.
    pub fn gap_factor(&self) -> f64 {
        let r = self.coupling_ratio();
        (1.0 - r) * (1.0 + r)
    }

    /// Squeezing parameter at the evaluation coupling.
    pub fn xi(&self) -> f64 {
        0.25 * self.gap_factor().ln()
    }

    /// `(g²/g_c²) e^{−4ξ} = r²/(1 − r²)`, the factor that carries the
    /// divergence of every eigenstate-change contribution.
    pub fn squeeze_gain(&self) -> f64 {
        let r = self.coupling_ratio();
        r * r / self.gap_factor()
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let sep = self.splitting / self.omega;
        if sep < DEFAULT_VALIDITY_RATIO {
            out.push(Diagnostic::WeakSeparation {
                ratio: sep,
                threshold: DEFAULT_VALIDITY_RATIO,
            });
        }
        let r = self.coupling_ratio();
        if r < PHASE_ACCURACY_RATIO {
            out.push(Diagnostic::PhaseApproximation { ratio: r });
        }
        out
    }
}

pub(crate) fn check_ratio(r: f64) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        return Err(domain(format!("coupling ratio {r} is not a valid g/g_c")));
    }
    if r >= 1.0 - CRITICAL_GUARD {
        return Err(Error::Critical { ratio: r });
    }
    Ok(())
}

/// A point on the adiabatic ramp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RampPoint {
    pub t: f64,
    pub g_of_t: f64,
    /// Instantaneous level spacing `ω √(1 − g(t)²/g_c²)`.
    pub gap: f64,
}

/// `g_c = √(Ωω)`.
pub fn critical_coupling(omega: f64, splitting: f64) -> Result<f64> {
    if !(omega > 0.0) || !(splitting > 0.0) {
        return Err(domain("critical coupling needs positive frequencies"));
    }
    Ok((splitting * omega).sqrt())
}

/// `ξ = ¼ ln(1 − g²/g_c²)`; non-positive and divergent at the critical point.
pub fn squeezing_parameter(g: f64, gc: f64) -> Result<f64> {
    if !(gc > 0.0) || !(g >= 0.0) {
        return Err(domain("squeezing parameter needs g >= 0 and g_c > 0"));
    }
    let r = g / gc;
    if r >= 1.0 {
        return Err(Error::Critical { ratio: r });
    }
    Ok(0.25 * ((1.0 - r) * (1.0 + r)).ln())
}

/// Coupling along the ramp `g(t) = 2 g_c √(γωt(γωt+1)) / (2γωt + 1)`.
pub fn ramp_value(t: f64, params: &ClosedParams) -> Result<RampPoint> {
    if !(t >= 0.0) {
        return Err(domain(format!("ramp time must be non-negative, got {t}")));
    }
    let gc = params.critical_coupling();
    let u = params.gamma * params.omega * t;
    let denom = 2.0 * u + 1.0;
    let g_of_t = 2.0 * gc * (u * (u + 1.0)).sqrt() / denom;
    // 1 − g²/g_c² = 1/(2u+1)² along this ramp.
    let gap = params.omega / denom;
    Ok(RampPoint { t, g_of_t, gap })
}

fn final_ratio(g_f: f64, params: &ClosedParams) -> Result<f64> {
    if !(g_f >= 0.0) {
        return Err(domain("final coupling must be non-negative"));
    }
    let r = g_f / params.critical_coupling();
    check_ratio(r)?;
    Ok(r)
}

/// Ramp duration that lands exactly on `g_f`; inverse of [`ramp_value`].
pub fn total_time(g_f: f64, params: &ClosedParams) -> Result<f64> {
    let r = final_ratio(g_f, params)?;
    let s = ((1.0 - r) * (1.0 + r)).sqrt();
    // (1/s − 1) rewritten to avoid cancellation for small r.
    let u = r * r / (2.0 * s * (1.0 + s));
    Ok(u / (params.gamma * params.omega))
}

/// Near-critical ramp duration `T = 1/(2γω√(1 − g_f²/g_c²))`. Overestimates
/// [`total_time`] by exactly `1/(2γω)`.
pub fn total_time_near_critical(g_f: f64, params: &ClosedParams) -> Result<f64> {
    let r = final_ratio(g_f, params)?;
    let s = ((1.0 - r) * (1.0 + r)).sqrt();
    Ok(1.0 / (2.0 * params.gamma * params.omega * s))
}

/// Closed-form accumulated dynamical phase
/// `φ = g_f ln[1/√(1 − g_f²/g_c²) + 1] / (2γ√(Ωω))`, valid for `g_f ≈ g_c`.
pub fn accumulated_phase(g_f: f64, params: &ClosedParams) -> Result<f64> {
    let r = final_ratio(g_f, params)?;
    let s = ((1.0 - r) * (1.0 + r)).sqrt();
    Ok(g_f * (1.0 / s).ln_1p() / (2.0 * params.gamma * params.critical_coupling()))
}

/// Exact `∫₀ᵀ E₀ dt` along the ramp ending at `g_f`; equals `−ξ_f/γ`.
pub fn accumulated_phase_exact(g_f: f64, params: &ClosedParams) -> Result<f64> {
    let r = final_ratio(g_f, params)?;
    Ok(-0.25 * ((1.0 - r) * (1.0 + r)).ln() / params.gamma)
}

/// `∂ξ/∂Ω` at fixed g and ω.
pub fn dxi_dsplitting(params: &ClosedParams) -> Result<f64> {
    params.validate()?;
    Ok(params.squeeze_gain() / (4.0 * params.splitting))
}

/// `∂φ/∂Ω = −φ/(2Ω)`, from the explicit `Ω^{-1/2}` prefactor of the phase.
pub fn dphi_dsplitting(params: &ClosedParams, phi: f64) -> f64 {
    -phi / (2.0 * params.splitting)
}
