//! Fisher information of a Gaussian outcome distribution by direct
//! integration of `(∂p)²/p`.

use crate::error::{domain, Error, Result};

/// Integration half-width in standard deviations.
pub const SIGMA_SPAN: f64 = 12.0;

/// `∫ (∂p)²/p dχ` for `p = N(mean, variance)` whose mean and variance move
/// at rates `dmean` and `dvariance`.
pub fn cfi_direct(_mean: f64, variance: f64, dmean: f64, dvariance: f64) -> Result<f64> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(domain(format!("variance must be positive, got {variance}")));
    }
    if dmean == 0.0 && dvariance == 0.0 {
        return Ok(0.0);
    }
    let sigma = variance.sqrt();
    let norm = 1.0 / (2.0 * std::f64::consts::PI * variance).sqrt();
    // integrate in standardized units z = (χ − μ)/σ
    let integrand = |z: f64| {
        let x = z * sigma;
        let score = dmean * x / variance + 0.5 * dvariance / variance * (z * z - 1.0);
        norm * (-0.5 * z * z).exp() * score * score * sigma
    };
    let scale = dmean * dmean / variance + 0.5 * (dvariance / variance).powi(2);
    let out = quadrature::integrate(integrand, -SIGMA_SPAN, SIGMA_SPAN, 1e-12 * scale);
    if !out.integral.is_finite() || out.error_estimate > 1e-9 * scale {
        return Err(Error::NonConvergence {
            iterations: out.num_function_evaluations as usize,
            residual: out.error_estimate,
        });
    }
    Ok(out.integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher_closed::cfi_gaussian;

    #[test]
    fn examples() {
        assert_eq!(cfi_direct(0.3, 0.25, 0.0, 0.0).unwrap(), 0.0);
        let v = cfi_direct(1.0, 0.25, 0.7, 0.0).unwrap();
        assert!((v - 0.49 / 0.25).abs() < 1e-8 * 1.96);
        let s = cfi_direct(0.0, 2.0, 0.0, 0.3).unwrap();
        assert!(((s - 0.5 * 0.09 / 4.0) / s).abs() < 1e-6);
        assert!(cfi_direct(0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn mixed_family_pins_half() {
        let (m, v, dm, dv) = (0.2, 0.7, -1.3, 0.45);
        let d = cfi_direct(m, v, dm, dv).unwrap();
        let g = cfi_gaussian(m, v, dm, dv).unwrap().total;
        assert!(((d - g) / g).abs() < 1e-10);
        // a unit coefficient on the variance term would be far off
        let wrong = dm * dm / v + (dv / v).powi(2);
        assert!(((d - wrong) / d).abs() > 1e-2);
    }
}
