//! Quantum Fisher information from finite differences of a state family.

use num_complex::Complex64;

use super::fock::{build_state, truncation_rule, FockState};
use crate::error::{domain, Error, Result};
use crate::fisher_dd::{steady_state, DrivenDissipativeParams};
use crate::model::ClosedParams;

/// Relative initial step `δ/Ω`.
pub const DEFAULT_REL_STEP: f64 = 1e-4;
/// Overlap below which the step is considered to wrap the phase.
pub const WRAP_OVERLAP: f64 = 0.99;
pub const MAX_HALVINGS: usize = 10;
/// Relative disagreement between the δ and δ/2 estimates that also
/// triggers a halving.
pub const RESOLUTION_MISMATCH: f64 = 0.1;

/// Which model constant the family varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    /// The splitting Ω.
    Splitting,
    /// The mode frequency ω.
    Omega,
}

fn central(builder: &dyn Fn(f64) -> Result<FockState>, x: f64, delta: f64) -> Result<(f64, f64)> {
    let c = builder(x)?;
    let p = builder(x + 0.5 * delta)?;
    let m = builder(x - 0.5 * delta)?;
    if p.n_max() != c.n_max() || m.n_max() != c.n_max() {
        return Err(domain("state builder changed n_max across the stencil"));
    }
    let overlap = m.inner(&p)?.norm();
    let inv = 1.0 / delta;
    let d: Vec<Complex64> = p
        .amplitudes()
        .iter()
        .zip(m.amplitudes())
        .map(|(a, b)| (a - b) * inv)
        .collect();
    let dd: f64 = d.iter().map(|v| v.norm_sqr()).sum();
    let cd: Complex64 = c
        .amplitudes()
        .iter()
        .zip(&d)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok((4.0 * (dd - cd.norm_sqr()), overlap))
}

/// `4[⟨∂ψ|∂ψ⟩ − |⟨ψ|∂ψ⟩|²]` at `x` by central differences, Richardson
/// extrapolated over steps δ and δ/2. The step is halved while the two
/// stencil ends overlap less than [`WRAP_OVERLAP`] or the two step sizes
/// disagree by more than [`RESOLUTION_MISMATCH`].
pub fn qfi_numeric<F>(builder: F, x: f64, delta: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<FockState>,
{
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(domain("finite-difference step must be positive"));
    }
    let mut d = delta;
    for _ in 0..=MAX_HALVINGS {
        let (q1, ov) = central(&builder, x, d)?;
        if ov < WRAP_OVERLAP {
            d *= 0.5;
            continue;
        }
        let (q2, _) = central(&builder, x, 0.5 * d)?;
        // a step spanning whole phase turns passes the overlap test but the
        // two estimates then disagree grossly
        if (q1 - q2).abs() > RESOLUTION_MISMATCH * q2.abs().max(q1.abs()) {
            d *= 0.5;
            continue;
        }
        return Ok((4.0 * q2 - q1) / 3.0);
    }
    Err(Error::StepControl(format!(
        "overlap still below {WRAP_OVERLAP} after {MAX_HALVINGS} halvings (delta = {d:e})"
    )))
}

/// Basis for a closed family at its nominal point, with headroom for the
/// stencil.
pub fn closed_family_n_max(params: &ClosedParams) -> usize {
    truncation_rule(params.xi() - 0.05, params.alpha_mag) + 8
}

/// Closed-protocol states `S(ξ) D(α e^{−iφ})|0⟩` as a function of Ω (or ω).
///
/// g is held fixed; ξ follows from `1 − g²/(Ωω)` and the phase scales as
/// `(Ωω)^{-1/2}` from its value `phi0` at the nominal point, which is the
/// dependence behind the analytic decomposition.
pub fn closed_family(
    params: ClosedParams,
    phi0: f64,
    n_max: usize,
    var: Variable,
) -> impl Fn(f64) -> Result<FockState> {
    let nominal = params.splitting * params.omega;
    move |x: f64| {
        let prod = match var {
            Variable::Splitting => x * params.omega,
            Variable::Omega => params.splitting * x,
        };
        if !(prod > 0.0) {
            return Err(domain("frequencies must stay positive along the family"));
        }
        let r2 = params.g * params.g / prod;
        if r2 >= 1.0 {
            return Err(Error::Critical { ratio: r2.sqrt() });
        }
        let xi = 0.25 * (-r2).ln_1p();
        let phi = phi0 * (nominal / prod).sqrt();
        let beta = Complex64::from_polar(params.alpha_mag, params.alpha_arg - phi);
        build_state(xi, beta, n_max)
    }
}

/// Driven steady states as a function of Ω with every other constant
/// (including the drive frequency and the time) fixed.
pub fn dd_family(
    params: DrivenDissipativeParams,
    n_max: usize,
) -> impl Fn(f64) -> Result<FockState> {
    move |x: f64| {
        let base = ClosedParams {
            splitting: x,
            ..params.base
        };
        let p = DrivenDissipativeParams { base, ..params };
        let s = steady_state(&p)?;
        build_state(s.xi, Complex64::from_polar(s.beta_mag, s.beta_arg), n_max)
    }
}
