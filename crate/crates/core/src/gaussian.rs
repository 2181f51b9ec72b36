//! Pure squeezed-displaced vacuum `S(ξ) D(β) |0⟩` and its quadrature
//! statistics.
//!
//! Conventions: `X = (a + a†)/2`, `P = (a − a†)/2i` (vacuum variance 1/4),
//! `S(ξ) = exp{½ξ(a² − a†²)}` for real ξ, `Q(θ) = X cos θ + P sin θ`.
//! With these, `⟨X⟩ = |β| cos(arg β) e^{−ξ}`, `⟨P⟩ = |β| sin(arg β) e^{ξ}`,
//! `Δ²X = e^{−2ξ}/4`, `Δ²P = e^{2ξ}/4` and `Cov(X, P) = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPureState {
    pub xi: f64,
    pub beta_mag: f64,
    pub beta_arg: f64,
}

impl GaussianPureState {
    pub fn new(xi: f64, beta_mag: f64, beta_arg: f64) -> Result<Self> {
        if !(xi <= 0.0) || !xi.is_finite() {
            return Err(domain(format!(
                "squeezing parameter must be finite and <= 0, got {xi}"
            )));
        }
        if !(beta_mag >= 0.0) || !beta_mag.is_finite() || !beta_arg.is_finite() {
            return Err(domain(
                "displacement must be finite with non-negative magnitude",
            ));
        }
        Ok(GaussianPureState {
            xi,
            beta_mag,
            beta_arg,
        })
    }

    /// State reached by the closed protocol: `β = α e^{−iφ}`.
    pub fn closed(xi: f64, alpha_mag: f64, alpha_arg: f64, phi: f64) -> Result<Self> {
        Self::new(xi, alpha_mag, alpha_arg - phi)
    }

    pub fn mean_x(&self) -> f64 {
        self.beta_mag * self.beta_arg.cos() * (-self.xi).exp()
    }

    pub fn mean_p(&self) -> f64 {
        self.beta_mag * self.beta_arg.sin() * self.xi.exp()
    }

    pub fn var_x(&self) -> f64 {
        0.25 * (-2.0 * self.xi).exp()
    }

    pub fn var_p(&self) -> f64 {
        0.25 * (2.0 * self.xi).exp()
    }

    /// Determinant of the (X, P) covariance matrix; 1/16 for a pure state.
    pub fn covariance_det(&self) -> f64 {
        self.var_x() * self.var_p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub theta: f64,
}

impl QuadratureSpec {
    pub fn new(theta: f64) -> Self {
        QuadratureSpec { theta }
    }

    pub const X: QuadratureSpec = QuadratureSpec { theta: 0.0 };
    pub const P: QuadratureSpec = QuadratureSpec { theta: PI / 2.0 };

    /// Angle reduced to `[0, π)`; the variance only depends on this.
    pub fn reduced(&self) -> f64 {
        self.theta.rem_euclid(PI)
    }
}

pub fn quad_mean(state: &GaussianPureState, spec: QuadratureSpec) -> f64 {
    let (s, c) = spec.theta.sin_cos();
    state.mean_x() * c + state.mean_p() * s
}

pub fn quad_variance(state: &GaussianPureState, spec: QuadratureSpec) -> f64 {
    let (s, c) = spec.reduced().sin_cos();
    state.var_x() * c * c + state.var_p() * s * s
}

/// Chain-rule derivative of `⟨Q⟩` given the derivatives of ξ, |β| and arg β
/// with respect to the estimated parameter.
pub fn quad_mean_derivative(
    state: &GaussianPureState,
    spec: QuadratureSpec,
    dxi: f64,
    dbeta_mag: f64,
    dbeta_arg: f64,
) -> f64 {
    let (sa, ca) = state.beta_arg.sin_cos();
    let em = (-state.xi).exp();
    let ep = state.xi.exp();
    let dx = em * (dbeta_mag * ca - state.beta_mag * sa * dbeta_arg - state.beta_mag * ca * dxi);
    let dp = ep * (dbeta_mag * sa + state.beta_mag * ca * dbeta_arg + state.beta_mag * sa * dxi);
    let (s, c) = spec.theta.sin_cos();
    dx * c + dp * s
}

/// Derivative of `Δ²Q`; only squeezing changes the variance.
pub fn quad_variance_derivative(state: &GaussianPureState, spec: QuadratureSpec, dxi: f64) -> f64 {
    let (s, c) = spec.reduced().sin_cos();
    2.0 * dxi * (state.var_p() * s * s - state.var_x() * c * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mean_examples() {
        let coh = GaussianPureState::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(quad_mean(&coh, QuadratureSpec::X), 1.0);
        assert!(quad_mean(&coh, QuadratureSpec::P).abs() < 1e-16);
        let s = GaussianPureState::closed(-0.5, 0.5, -0.3, 0.7).unwrap();
        // mpmath: 0.5 cos(1) e^{0.5}
        assert!((quad_mean(&s, QuadratureSpec::X) - 0.44540395214656430978).abs() < 1e-15);
        // P mean carries −|α| sin(φ − arg α) e^{ξ}
        let want_p = -0.5 * (1.0f64).sin() * (-0.5f64).exp();
        assert!((s.mean_p() - want_p).abs() < 1e-15);
    }

    #[test]
    fn variance_examples() {
        let vac = GaussianPureState::new(0.0, 0.0, 0.0).unwrap();
        for i in 0..10 {
            let v = quad_variance(&vac, QuadratureSpec::new(i as f64 * 0.37));
            assert!((v - 0.25).abs() < 1e-16);
        }
        let s = GaussianPureState::new(-1.0, 0.3, 0.2).unwrap();
        assert!((quad_variance(&s, QuadratureSpec::X) - 1.8472640247326625568).abs() < 1e-15);
        assert!((quad_variance(&s, QuadratureSpec::P) - 0.033833820809153172973).abs() < 1e-16);
        assert!((s.covariance_det() - 1.0 / 16.0).abs() < 1e-16);
    }

    #[test]
    fn rejects_positive_xi() {
        assert!(GaussianPureState::new(0.1, 1.0, 0.0).is_err());
        assert!(GaussianPureState::new(-0.1, -1.0, 0.0).is_err());
    }

    #[test]
    fn zero_derivatives_give_zero() {
        let s = GaussianPureState::new(-0.7, 1.3, 0.4).unwrap();
        assert_eq!(
            quad_mean_derivative(&s, QuadratureSpec::new(0.9), 0.0, 0.0, 0.0),
            0.0
        );
        assert_eq!(
            quad_variance_derivative(&s, QuadratureSpec::new(0.9), 0.0),
            0.0
        );
    }

    #[test]
    fn derivative_matches_central_difference() {
        // state(Ω) with linear dependence of each parameter on Ω
        let (xi0, m0, a0) = (-0.6, 1.1, 0.8);
        let (dxi, dm, da) = (0.013, -0.02, 0.4);
        let at = |h: f64| GaussianPureState::new(xi0 + dxi * h, m0 + dm * h, a0 + da * h).unwrap();
        for &th in &[0.0, 0.3, 1.2, 2.9] {
            let spec = QuadratureSpec::new(th);
            let h = 1e-4;
            let d = |h: f64| (quad_mean(&at(h), spec) - quad_mean(&at(-h), spec)) / (2.0 * h);
            let fd = (4.0 * d(h / 2.0) - d(h)) / 3.0;
            let an = quad_mean_derivative(&at(0.0), spec, dxi, dm, da);
            assert!(((an - fd) / an).abs() < 1e-8, "θ = {th}");
            let dv =
                |h: f64| (quad_variance(&at(h), spec) - quad_variance(&at(-h), spec)) / (2.0 * h);
            let fdv = (4.0 * dv(h / 2.0) - dv(h)) / 3.0;
            let anv = quad_variance_derivative(&at(0.0), spec, dxi);
            assert!(((anv - fdv) / anv).abs() < 1e-8);
        }
    }

    #[test]
    fn reproduces_x_bracket() {
        // arg α = 0, θ = 0: ∂⟨X⟩ = −|α| e^{−ξ}/(4Ω) [(g²/g_c²) cos φ e^{−4ξ} − 2φ sin φ]
        let (r, big, am, phi) = (0.9f64, 200.0, 0.5, 1.0);
        let gap = (1.0 - r) * (1.0 + r);
        let xi = 0.25 * gap.ln();
        let dxi = r * r / gap / (4.0 * big);
        let dphi = -phi / (2.0 * big);
        let s = GaussianPureState::closed(xi, am, 0.0, phi).unwrap();
        let d = quad_mean_derivative(&s, QuadratureSpec::X, dxi, 0.0, -dphi);
        let bracket = r * r * phi.cos() * (-4.0 * xi).exp() - 2.0 * phi * phi.sin();
        let want = -am * (-xi).exp() / (4.0 * big) * bracket;
        assert!(((d - want) / want).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn variance_positive_and_pi_periodic(xi in -3.0f64..0.0, th in -10.0f64..10.0) {
            let s = GaussianPureState::new(xi, 0.5, 0.1).unwrap();
            let a = quad_variance(&s, QuadratureSpec::new(th));
            let b = quad_variance(&s, QuadratureSpec::new(th + PI));
            prop_assert!(a > 0.0);
            prop_assert!((a - b).abs() <= 1e-13 * a.max(b));
        }

        #[test]
        fn uncertainty_product(xi in -3.0f64..0.0, th in 0.0f64..PI) {
            let s = GaussianPureState::new(xi, 0.0, 0.0).unwrap();
            let a = quad_variance(&s, QuadratureSpec::new(th));
            let b = quad_variance(&s, QuadratureSpec::new(th + PI / 2.0));
            prop_assert!(a * b >= 1.0 / 16.0 * (1.0 - 1e-12));
        }
    }

    #[test]
    fn uncertainty_equality_only_on_axes() {
        let s = GaussianPureState::new(-0.8, 0.0, 0.0).unwrap();
        let prod = |th: f64| {
            quad_variance(&s, QuadratureSpec::new(th))
                * quad_variance(&s, QuadratureSpec::new(th + PI / 2.0))
        };
        assert!((prod(0.0) - 1.0 / 16.0).abs() < 1e-15);
        assert!((prod(PI / 2.0) - 1.0 / 16.0).abs() < 1e-15);
        assert!(prod(0.4) > 1.0 / 16.0 + 1e-3);
    }
}
