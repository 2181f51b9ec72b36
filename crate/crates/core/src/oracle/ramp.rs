//! Schrödinger integration of the adiabatic coupling ramp.

use num_complex::Complex64;
use serde::Serialize;

use super::fock::{build_state, truncation_rule, FockState};
use super::ops::{SparseOp, C};
use crate::error::{domain, Error, Result};
use crate::model::{ramp_value, total_time, ClosedParams};

/// Largest tolerated `|1 − ‖ψ‖²|` at the end of a run.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;
/// Successive halvings must agree this well in fidelity.
pub const FIDELITY_AGREEMENT: f64 = 1e-8;
const MAX_DT_HALVINGS: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct RampOutcome {
    pub state: FockState,
    /// `S(ξ_f) D(α e^{−iφ})|0⟩` with φ the integrated gap.
    pub reference: FockState,
    pub fidelity: f64,
    /// `∫₀ᵀ ω√(1 − g(t)²/g_c²) dt`, integrated alongside the state.
    pub phase: f64,
    pub duration: f64,
    pub dt: f64,
    pub steps: usize,
    pub norm_drift: f64,
}

/// Step bound `0.01 min(1, e^{2ξ_f})/ω`.
pub fn default_dt(params: &ClosedParams, g_f: f64) -> Result<f64> {
    let p = params.with_coupling(g_f)?;
    Ok(0.01 * (2.0 * p.xi()).exp().min(1.0) / params.omega)
}

/// Basis for a ramp ending at `g_f`.
pub fn ramp_n_max(params: &ClosedParams, g_f: f64) -> Result<usize> {
    let p = params.with_coupling(g_f)?;
    Ok(truncation_rule(p.xi(), params.alpha_mag) + 8)
}

/// Integrate `i∂ψ = ω[a†a − (g(t)²/4g_c²)(a + a†)²] ψ` with fixed-step RK4
/// from the coherent state α at t = 0 to the exact ramp duration for `g_f`.
pub fn evolve_ramp(params: &ClosedParams, g_f: f64, dt: f64, n_max: usize) -> Result<RampOutcome> {
    params.validate()?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(domain("time step must be positive"));
    }
    let fin = params.with_coupling(g_f)?;
    let duration = total_time(g_f, params)?;
    let steps = ((duration / dt).ceil() as usize).max(1);
    let h = duration / steps as f64;

    let dim = n_max + 1;
    let a = SparseOp::annihilation(dim);
    let x2 = a.add(&a.adjoint());
    let q2 = x2.mul(&x2);
    let num: Vec<f64> = (0..dim).map(|n| n as f64).collect();
    let om = params.omega;
    let gc = params.critical_coupling();

    let ratio2 = |t: f64| -> Result<f64> {
        let g = ramp_value(t, params)?.g_of_t / gc;
        Ok(g * g)
    };
    // k = −iHψ
    let rhs = |t: f64, psi: &[C], out: &mut [C]| -> Result<()> {
        let r2 = ratio2(t)?;
        for n in 0..dim {
            out[n] = C::new(0.0, -om * num[n]) * psi[n];
        }
        q2.apply_into(psi, C::new(0.0, om * r2 / 4.0), out);
        Ok(())
    };
    let gap = |t: f64| -> Result<f64> { Ok(ramp_value(t, params)?.gap) };

    let alpha = Complex64::from_polar(params.alpha_mag, params.alpha_arg);
    let mut psi = build_state(0.0, alpha, n_max)?.amplitudes().to_vec();
    let zero = vec![C::new(0.0, 0.0); dim];
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero);
    let mut phase = 0.0;
    for s in 0..steps {
        let t = s as f64 * h;
        rhs(t, &psi, &mut k1)?;
        for n in 0..dim {
            tmp[n] = psi[n] + 0.5 * h * k1[n];
        }
        rhs(t + 0.5 * h, &tmp, &mut k2)?;
        for n in 0..dim {
            tmp[n] = psi[n] + 0.5 * h * k2[n];
        }
        rhs(t + 0.5 * h, &tmp, &mut k3)?;
        for n in 0..dim {
            tmp[n] = psi[n] + h * k3[n];
        }
        rhs(t + h, &tmp, &mut k4)?;
        for n in 0..dim {
            psi[n] += h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
        }
        phase += h / 6.0 * (gap(t)? + 4.0 * gap(t + 0.5 * h)? + gap(t + h)?);
    }

    let state = FockState::from_raw(psi);
    let norm_drift = (1.0 - state.norm_sqr()).abs();
    if !(norm_drift <= NORM_DRIFT_LIMIT) {
        return Err(Error::Integrator(format!(
            "norm drift {norm_drift:e} exceeds {NORM_DRIFT_LIMIT:e} (dt = {h:e}, n_max = {n_max})"
        )));
    }
    let reference = build_state(fin.xi(), alpha * Complex64::from_polar(1.0, -phase), n_max)?;
    let fidelity = state.fidelity(&reference)? / state.norm_sqr();
    Ok(RampOutcome {
        state,
        reference,
        fidelity,
        phase,
        duration,
        dt: h,
        steps,
        norm_drift,
    })
}

/// [`evolve_ramp`] starting at [`default_dt`], halving the step until two
/// successive fidelities agree to [`FIDELITY_AGREEMENT`].
pub fn evolve_ramp_converged(params: &ClosedParams, g_f: f64, n_max: usize) -> Result<RampOutcome> {
    let mut dt = default_dt(params, g_f)?;
    let mut prev = evolve_ramp(params, g_f, dt, n_max)?;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_DT_HALVINGS {
        dt *= 0.5;
        let next = evolve_ramp(params, g_f, dt, n_max)?;
        change = (next.fidelity - prev.fidelity).abs();
        prev = next;
        if change <= FIDELITY_AGREEMENT {
            return Ok(prev);
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_DT_HALVINGS,
        residual: change,
    })
}
