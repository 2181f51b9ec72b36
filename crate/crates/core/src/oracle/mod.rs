//! Brute-force reference computations in a truncated number basis.
//!
//! Every check can be wrapped in a [`Certificate`]: the same quantity is
//! evaluated at `n_max` and at `2 n_max`, and the difference is recorded
//! next to the analytic value it is compared with.

pub mod cfi;
pub mod fock;
pub mod lindblad;
pub mod ops;
pub mod qfi;
pub mod ramp;

use serde::Serialize;

pub use cfi::cfi_direct;
pub use fock::{build_state, build_state_auto, truncation_rule, FockState};
pub use lindblad::{lindblad_run, lindblad_steady, DensityMatrix, LindbladRun, SteadyMoments};
pub use qfi::{closed_family, closed_family_n_max, dd_family, qfi_numeric, Variable};
pub use ramp::{evolve_ramp, evolve_ramp_converged, RampOutcome};

use crate::error::Result;

/// Record of one oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub check: String,
    pub inputs: serde_json::Value,
    pub n_max: usize,
    pub value: f64,
    /// Same computation with twice the basis.
    pub value_doubled: f64,
    pub truncation_change: f64,
    /// Analytic counterpart, if any.
    pub reference: Option<f64>,
    /// `|value − reference|`, relative when `relative` is set.
    pub deviation: Option<f64>,
    pub relative: bool,
    pub tolerance: f64,
    pub passed: bool,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate is plain data")
    }
}

/// Run `compute` at `n_max` and `2 n_max` and compare with `reference`.
///
/// The check passes when the deviation from the reference is within
/// `tolerance` and doubling the basis moves the value by less than a tenth
/// of the tolerance (in the same units).
pub fn certify<F>(
    check: &str,
    inputs: serde_json::Value,
    n_max: usize,
    reference: Option<f64>,
    tolerance: f64,
    relative: bool,
    compute: F,
) -> Result<Certificate>
where
    F: Fn(usize) -> Result<f64>,
{
    let value = compute(n_max)?;
    let value_doubled = compute(2 * n_max)?;
    let scale = |x: f64| {
        if relative {
            x / reference.unwrap_or(value).abs().max(f64::MIN_POSITIVE)
        } else {
            x
        }
    };
    let truncation_change = (value_doubled - value).abs();
    let deviation = reference.map(|r| scale((value - r).abs()));
    let passed =
        deviation.is_none_or(|d| d <= tolerance) && scale(truncation_change) <= 0.1 * tolerance;
    Ok(Certificate {
        check: check.to_string(),
        inputs,
        n_max,
        value,
        value_doubled,
        truncation_change,
        reference,
        deviation,
        relative,
        tolerance,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn certificate_round_trip() {
        let c = certify(
            "vacuum variance",
            serde_json::json!({"xi": 0.0}),
            10,
            Some(0.25),
            1e-12,
            false,
            |n| {
                Ok(build_state(0.0, Complex64::new(0.0, 0.0), n)?
                    .quadrature_stats(0.0)
                    .1)
            },
        )
        .unwrap();
        assert!(c.passed);
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(v["n_max"], 10);
        assert_eq!(v["check"], "vacuum variance");
    }

    #[test]
    fn certificate_fails_on_mismatch() {
        let c = certify(
            "off",
            serde_json::Value::Null,
            4,
            Some(1.0),
            1e-3,
            true,
            |_| Ok(1.1),
        )
        .unwrap();
        assert!(!c.passed);
    }
}
