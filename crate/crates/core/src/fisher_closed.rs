//! Fisher information of the closed protocol.
//!
//! A coherent state `α` is carried adiabatically to coupling `g`, ending in
//! `S(ξ) D(α e^{−iφ}) |0⟩`. Both ξ (eigenstate shape) and φ (dynamical
//! phase) depend on Ω, giving three QFI contributions:
//!
//! ```text
//! I^φ = φ² |α|² / Ω²
//! I^ξ = (g/g_c)⁴ (1 + 2|α|²) / (8 Ω² e^{8ξ})
//! I^I = (g/g_c)² e^{−4ξ} |α|² φ sin[2(arg α − φ)] / Ω²
//! ```
//!
//! The sign of `I^I` follows from `∂ξ/∂Ω > 0` and `∂φ/∂Ω = −φ/(2Ω)`, the
//! same derivative conventions that produce the X and P quadrature forms
//! below. With the opposite sign the total can fall below the quadrature
//! Fisher information.
//!
//! For a general quadrature angle the classical Fisher information is the
//! Gaussian expression `(∂⟨Q⟩)²/Δ²Q + ½(∂Δ²Q)²/(Δ²Q)²` with the moments of
//! [`crate::gaussian`] and the analytic derivatives of [`crate::model`].

use serde::Serialize;

use crate::angle;
use crate::error::{domain, Error, Result};
use crate::gaussian::{
    quad_mean, quad_mean_derivative, quad_variance, quad_variance_derivative, GaussianPureState,
    QuadratureSpec,
};
use crate::model::{accumulated_phase, dphi_dsplitting, dxi_dsplitting, ClosedParams};

/// The three QFI contributions and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QfiBreakdown {
    phase_term: f64,
    critical_term: f64,
    interference_term: f64,
    total: f64,
}

impl QfiBreakdown {
    pub fn new(phase_term: f64, critical_term: f64, interference_term: f64) -> Result<Self> {
        let total = phase_term + critical_term + interference_term;
        let scale = phase_term.abs() + critical_term.abs() + interference_term.abs();
        if !total.is_finite() || total < -1e-12 * scale {
            return Err(Error::Internal(format!(
                "negative QFI {total:e} from ({phase_term:e}, {critical_term:e}, {interference_term:e})"
            )));
        }
        Ok(QfiBreakdown {
            phase_term,
            critical_term,
            interference_term,
            total,
        })
    }

    pub fn phase_term(&self) -> f64 {
        self.phase_term
    }
    pub fn critical_term(&self) -> f64 {
        self.critical_term
    }
    pub fn interference_term(&self) -> f64 {
        self.interference_term
    }
    pub fn total(&self) -> f64 {
        self.total
    }
}

/// Classical Fisher information of a Gaussian outcome distribution, split
/// into the mean-shift and the variance-change parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfiResult {
    pub theta: f64,
    pub mean_term: f64,
    pub variance_term: f64,
    pub total: f64,
}

impl CfiResult {
    fn from_terms(theta: f64, mean_term: f64, variance_term: f64) -> Self {
        CfiResult {
            theta,
            mean_term,
            variance_term,
            total: mean_term + variance_term,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }
}

pub fn qfi_phase(phi: f64, splitting: f64, alpha_mag: f64) -> f64 {
    let a = phi * alpha_mag / splitting;
    a * a
}

/// `r⁴(1 + w)/(8Ω²(1 − r²)²)`; `w` is 2|α|² for the closed protocol and
/// 2|α̃|² for the driven steady state.
pub(crate) fn critical_term(params: &ClosedParams, weight: f64) -> f64 {
    let gain = params.squeeze_gain();
    gain * gain * (1.0 + weight) / (8.0 * params.splitting * params.splitting)
}

pub fn qfi_critical(params: &ClosedParams) -> Result<f64> {
    params.validate()?;
    Ok(critical_term(
        params,
        2.0 * params.alpha_mag * params.alpha_mag,
    ))
}

pub fn qfi_interference(params: &ClosedParams, phi: f64) -> Result<f64> {
    params.validate()?;
    let a2 = params.alpha_mag * params.alpha_mag;
    let s = (2.0 * (params.alpha_arg - phi)).sin();
    Ok(params.squeeze_gain() * a2 * phi * s / (params.splitting * params.splitting))
}

/// QFI at the end of the ramp to `params.g`, with φ from
/// [`accumulated_phase`].
pub fn qfi_total_closed(params: &ClosedParams) -> Result<QfiBreakdown> {
    let phi = accumulated_phase(params.g, params)?;
    qfi_breakdown_at_phase(params, phi)
}

/// Same decomposition with an externally supplied phase.
pub fn qfi_breakdown_at_phase(params: &ClosedParams, phi: f64) -> Result<QfiBreakdown> {
    QfiBreakdown::new(
        qfi_phase(phi, params.splitting, params.alpha_mag),
        qfi_critical(params)?,
        qfi_interference(params, phi)?,
    )
}

/// `(∂⟨O⟩)²/Δ²O + ½ (∂Δ²O)²/(Δ²O)²`. The returned `theta` is 0; callers
/// that know the angle attach it with [`CfiResult::with_theta`].
pub fn cfi_gaussian(_mean: f64, variance: f64, dmean: f64, dvariance: f64) -> Result<CfiResult> {
    if !(variance > 0.0) {
        return Err(domain(format!("variance must be positive, got {variance}")));
    }
    let mean_term = dmean * dmean / variance;
    let v = dvariance / variance;
    Ok(CfiResult::from_terms(0.0, mean_term, 0.5 * v * v))
}

/// Final state of the closed protocol for phase φ.
pub fn closed_state(params: &ClosedParams, phi: f64) -> Result<GaussianPureState> {
    GaussianPureState::closed(params.xi(), params.alpha_mag, params.alpha_arg, phi)
}

/// Ω-derivatives `(∂ξ, ∂|β|, ∂arg β)` of the closed final state.
pub fn closed_state_derivatives(params: &ClosedParams, phi: f64) -> Result<(f64, f64, f64)> {
    Ok((dxi_dsplitting(params)?, 0.0, -dphi_dsplitting(params, phi)))
}

/// Fisher information of an arbitrary Gaussian state family measured along
/// `spec`.
pub fn cfi_for_state(
    state: &GaussianPureState,
    derivs: (f64, f64, f64),
    spec: QuadratureSpec,
) -> Result<CfiResult> {
    let (dxi, dmag, darg) = derivs;
    let mean = quad_mean(state, spec);
    let var = quad_variance(state, spec);
    let dmean = quad_mean_derivative(state, spec, dxi, dmag, darg);
    let dvar = quad_variance_derivative(state, spec, dxi);
    Ok(cfi_gaussian(mean, var, dmean, dvar)?.with_theta(spec.theta))
}

/// Quadrature Fisher information at angle θ for the closed final state.
pub fn cfi_quadrature(params: &ClosedParams, phi: f64, theta: f64) -> Result<CfiResult> {
    let state = closed_state(params, phi)?;
    let derivs = closed_state_derivatives(params, phi)?;
    cfi_for_state(&state, derivs, QuadratureSpec::new(theta))
}

fn require_real_alpha(params: &ClosedParams) -> Result<()> {
    params.validate()?;
    if params.alpha_arg != 0.0 {
        return Err(domain(
            "X/P closed forms assume arg alpha = 0; use cfi_quadrature",
        ));
    }
    Ok(())
}

fn x_p_common(params: &ClosedParams) -> (f64, f64) {
    let gain = params.squeeze_gain();
    let om2 = params.splitting * params.splitting;
    (gain, gain * gain / (8.0 * om2))
}

/// Closed-form X-quadrature Fisher information (requires arg α = 0).
pub fn cfi_x(params: &ClosedParams, phi: f64) -> Result<CfiResult> {
    require_real_alpha(params)?;
    let (gain, variance_term) = x_p_common(params);
    let (s, c) = phi.sin_cos();
    let bracket = gain * c - 2.0 * phi * s;
    let mean_term =
        params.alpha_mag.powi(2) * bracket * bracket / (4.0 * params.splitting * params.splitting);
    Ok(CfiResult::from_terms(0.0, mean_term, variance_term))
}

/// Closed-form P-quadrature Fisher information (requires arg α = 0).
pub fn cfi_p(params: &ClosedParams, phi: f64) -> Result<CfiResult> {
    require_real_alpha(params)?;
    let (gain, variance_term) = x_p_common(params);
    let (s, c) = phi.sin_cos();
    let bracket = gain * s - 2.0 * phi * c;
    let mean_term =
        params.alpha_mag.powi(2) * bracket * bracket / (4.0 * params.splitting * params.splitting);
    Ok(CfiResult::from_terms(
        std::f64::consts::FRAC_PI_2,
        mean_term,
        variance_term,
    ))
}

/// Best quadrature angle in `[0, π)` and its Fisher information.
pub fn optimize_quadrature_angle(params: &ClosedParams, phi: f64) -> Result<(f64, CfiResult)> {
    let state = closed_state(params, phi)?;
    let derivs = closed_state_derivatives(params, phi)?;
    optimize_for_state(&state, derivs)
}

pub fn optimize_for_state(
    state: &GaussianPureState,
    derivs: (f64, f64, f64),
) -> Result<(f64, CfiResult)> {
    let (theta, _) =
        angle::maximize(|th| Ok(cfi_for_state(state, derivs, QuadratureSpec::new(th))?.total))?;
    Ok((
        theta,
        cfi_for_state(state, derivs, QuadratureSpec::new(theta))?,
    ))
}

/// `I_ω / I_Ω = Ω²/ω²`.
pub fn qfi_ratio_omega(splitting: f64, omega: f64) -> Result<f64> {
    if !(splitting > 0.0) || !(omega > 0.0) {
        return Err(domain("frequencies must be positive"));
    }
    let r = splitting / omega;
    Ok(r * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn params(r: f64, am: f64, arg: f64) -> ClosedParams {
        ClosedParams::from_ratio(1.0, 200.0, r, 1e-3, am, arg).unwrap()
    }

    #[test]
    fn phase_term_examples() {
        assert_eq!(qfi_phase(10.0, 200.0, 0.0), 0.0);
        assert_eq!(qfi_phase(0.0, 200.0, 0.5), 0.0);
        assert!(rel(qfi_phase(1573.9, 200.0, 0.5), 15.4822575625) < 1e-14);
    }

    #[test]
    fn critical_term_examples() {
        assert_eq!(qfi_critical(&params(0.0, 0.5, 0.0)).unwrap(), 0.0);
        let c0 = qfi_critical(&params(0.9, 0.0, 0.0)).unwrap();
        // mpmath: 1/(8·200²·(1 − 1/0.81)²)
        assert!(rel(c0, 5.6795360110803324e-5) < 1e-13);
        let c5 = qfi_critical(&params(0.9, 0.5, 0.0)).unwrap();
        assert!(rel(c5, 1.5 * c0) < 1e-15);
    }

    #[test]
    fn critical_printed_forms_agree() {
        for &r in &[0.05, 0.3, 0.7, 0.9, 0.99] {
            let p = params(r, 0.7, 0.0);
            let w = 1.0 + 2.0 * 0.49;
            let om2 = 200.0f64 * 200.0;
            let first = w / (8.0 * om2 * (1.0 - 1.0 / (r * r)).powi(2));
            let second = r.powi(4) * w / (8.0 * om2 * (8.0 * p.xi()).exp());
            let got = qfi_critical(&p).unwrap();
            assert!(rel(got, first) < 1e-13, "r = {r}");
            assert!(rel(got, second) < 1e-13, "r = {r}");
        }
    }

    #[test]
    fn interference_examples() {
        let p = params(0.9, 0.5, 0.0);
        assert_eq!(qfi_interference(&p, 0.0).unwrap(), 0.0);
        // arg α − φ = π/4 with φ = 100
        let p = params(0.9, 0.5, 100.0 + PI / 4.0);
        let v = qfi_interference(&p, 100.0).unwrap();
        // |α|²φ/(Ω²|1 − g_c²/g²|), positive with the derived sign
        assert!(rel(v, 2.6644736842105263e-3) < 1e-12);
        assert_eq!(qfi_interference(&params(0.0, 0.5, 0.3), 7.0).unwrap(), 0.0);
    }

    #[test]
    fn no_excitation_is_pure_critical() {
        let p = params(0.8, 0.0, 0.0);
        let b = qfi_total_closed(&p).unwrap();
        assert_eq!(b.phase_term(), 0.0);
        assert_eq!(b.interference_term(), 0.0);
        assert_eq!(b.total(), qfi_critical(&p).unwrap());
    }

    #[test]
    fn cfi_gaussian_examples() {
        assert_eq!(cfi_gaussian(0.3, 0.25, 0.0, 0.0).unwrap().total, 0.0);
        let r = cfi_gaussian(0.0, 0.25, 1.0, 0.0).unwrap();
        assert_eq!(r.mean_term, 4.0);
        assert!(cfi_gaussian(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(cfi_gaussian(0.0, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn x_p_no_excitation() {
        let p = params(0.9, 0.0, 0.0);
        let i0 = qfi_critical(&p).unwrap();
        for f in [cfi_x(&p, 2.0).unwrap(), cfi_p(&p, 2.0).unwrap()] {
            assert_eq!(f.mean_term, 0.0);
            assert!(rel(f.variance_term, i0) < 1e-15);
        }
        assert!(cfi_x(&params(0.9, 0.5, 0.1), 1.0).is_err());
    }

    #[test]
    fn x_saturates_at_zero_phase() {
        for &r in &[0.3, 0.9, 0.999] {
            let p = params(r, 0.5, 0.0);
            let q = qfi_breakdown_at_phase(&p, 0.0).unwrap().total();
            let x = cfi_x(&p, 0.0).unwrap().total;
            assert!(rel(x, q) <= 1e-12, "r = {r}");
        }
    }

    #[test]
    fn x_deficit_identity() {
        // QFI − F^X = |α|²(φ cos φ − (A/2) sin φ)²/Ω², which is I^φ at φ = kπ
        for &r in &[0.5, 0.9, 0.99] {
            for &phi in &[PI, 2.0 * PI, 0.7, 3.3, 100.0] {
                let p = params(r, 0.5, 0.0);
                let q = qfi_breakdown_at_phase(&p, phi).unwrap();
                let x = cfi_x(&p, phi).unwrap().total;
                let a = p.squeeze_gain();
                let d = phi * phi.cos() - 0.5 * a * phi.sin();
                let want = 0.25 * d * d / (200.0f64 * 200.0);
                assert!(
                    ((q.total() - x) - want).abs() <= 1e-11 * q.total(),
                    "r={r} φ={phi}"
                );
            }
        }
    }

    #[test]
    fn dual_path_x_and_p() {
        let p = params(0.9, 0.5, 0.0);
        let phi = 1.0;
        let x = cfi_x(&p, phi).unwrap();
        let xq = cfi_quadrature(&p, phi, 0.0).unwrap();
        assert!(rel(x.total, xq.total) < 1e-10);
        assert!(rel(x.mean_term, xq.mean_term) < 1e-10);
        let pp = cfi_p(&p, phi).unwrap();
        let pq = cfi_quadrature(&p, phi, PI / 2.0).unwrap();
        assert!(rel(pp.total, pq.total) < 1e-10);
        assert!(rel(pp.variance_term, pq.variance_term) < 1e-10);
    }

    #[test]
    fn optimum_on_aligned_state() {
        // φ = 0, arg α = 0: best quadrature is X
        let p = params(0.9, 0.5, 0.0);
        let (th, c) = optimize_quadrature_angle(&p, 0.0).unwrap();
        let d = th.rem_euclid(PI);
        assert!(d.min(PI - d) < 1e-6, "θ* = {th}");
        assert!(rel(c.total, qfi_breakdown_at_phase(&p, 0.0).unwrap().total()) < 1e-9);
    }

    #[test]
    fn optimum_beats_grid_and_axes() {
        let p = params(0.95, 0.5, 0.0);
        let phi = accumulated_phase(p.g, &p).unwrap();
        let (_, best) = optimize_quadrature_angle(&p, phi).unwrap();
        for i in 0..360 {
            let th = i as f64 * PI / 360.0;
            assert!(best.total >= cfi_quadrature(&p, phi, th).unwrap().total - 1e-12 * best.total);
        }
        let ax = cfi_x(&p, phi)
            .unwrap()
            .total
            .max(cfi_p(&p, phi).unwrap().total);
        assert!(best.total >= ax - 1e-12);
        assert!(best.total <= qfi_total_closed(&p).unwrap().total() * (1.0 + 1e-9));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(qfi_ratio_omega(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(qfi_ratio_omega(200.0, 1.0).unwrap(), 40000.0);
        assert!(qfi_ratio_omega(0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn cramer_rao_everywhere(
            r in 0.0f64..0.9999,
            am in 0.0f64..3.0,
            arg in -PI..PI,
            phi in 0.0f64..2000.0,
            th in 0.0f64..PI,
            big in 10.0f64..500.0,
        ) {
            let p = ClosedParams::from_ratio(1.0, big, r, 1e-3, am, arg).unwrap();
            let q = qfi_breakdown_at_phase(&p, phi).unwrap();
            let c = cfi_quadrature(&p, phi, th).unwrap();
            prop_assert!(q.total() >= 0.0);
            prop_assert!(c.total <= q.total() * (1.0 + 1e-9) + 1e-300);
        }

        #[test]
        fn sum_identity(r in 0.0f64..0.9999, am in 0.0f64..3.0, arg in -PI..PI) {
            let p = ClosedParams::from_ratio(1.0, 200.0, r, 1e-3, am, arg).unwrap();
            let b = qfi_total_closed(&p).unwrap();
            prop_assert_eq!(b.total(), b.phase_term() + b.critical_term() + b.interference_term());
        }
    }
}
