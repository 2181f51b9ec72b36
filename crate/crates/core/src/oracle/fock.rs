//! Pure states in a truncated number basis.

use num_complex::Complex64;
use serde::Serialize;

use super::ops::{quadrature_op, SparseOp, C};
use crate::error::{domain, Error, Result};

/// Default allowance for the norm lost to truncation.
pub const TRUNCATION_BUDGET: f64 = 1e-8;
/// Largest basis the automatic rule will grow to.
pub const MAX_DIM: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockState {
    amplitudes: Vec<Complex64>,
}

impl FockState {
    /// Wrap raw amplitudes `c_0 … c_{n_max}`; they must be normalized to
    /// within `TRUNCATION_BUDGET`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(domain("a Fock state needs n_max >= 1"));
        }
        let s = FockState { amplitudes };
        let dev = (1.0 - s.norm_sqr()).abs();
        if !(dev <= TRUNCATION_BUDGET) {
            return Err(domain(format!(
                "amplitudes not normalized (|1 - norm| = {dev:e})"
            )));
        }
        Ok(s)
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        FockState { amplitudes }
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &FockState) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(domain("states live in different truncations"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &FockState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn expectation(&self, op: &SparseOp) -> Complex64 {
        op.expectation(&self.amplitudes)
    }

    /// Mean and variance of `X cos θ + P sin θ`.
    pub fn quadrature_stats(&self, theta: f64) -> (f64, f64) {
        let a = SparseOp::annihilation(self.amplitudes.len());
        let q = quadrature_op(&a, theta);
        let m = self.expectation(&q).re;
        let q2 = self.expectation(&q.mul(&q)).re;
        (m, q2 - m * m)
    }

    pub fn mean_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }
}

/// Basis size heuristic `⌈(|β|e^{|ξ|} + 4)² + 10 e^{2|ξ|}⌉`.
pub fn truncation_rule(xi: f64, beta_mag: f64) -> usize {
    let s = xi.abs().exp();
    ((beta_mag * s + 4.0).powi(2) + 10.0 * s * s).ceil() as usize
}

/// `S(ξ) D(β) |0⟩` truncated to `n ≤ n_max`, up to a global phase (the
/// vacuum amplitude is made real and positive).
///
/// The amplitudes solve `(a cosh ξ + a† sinh ξ)|ψ⟩ = β|ψ⟩` term by term on a
/// longer basis; the weight beyond `n_max` is the truncation deficit and must
/// stay within `TRUNCATION_BUDGET`.
pub fn build_state(xi: f64, beta: Complex64, n_max: usize) -> Result<FockState> {
    build_state_with_budget(xi, beta, n_max, TRUNCATION_BUDGET)
}

pub fn build_state_with_budget(
    xi: f64,
    beta: Complex64,
    n_max: usize,
    budget: f64,
) -> Result<FockState> {
    if !xi.is_finite() || !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(domain("state parameters must be finite"));
    }
    if n_max < 1 {
        return Err(domain("n_max must be at least 1"));
    }
    let ext = 2 * n_max + 64;
    let (ch, sh) = (xi.cosh(), xi.sinh());
    let mut c = vec![C::new(0.0, 0.0); ext + 1];
    c[0] = C::new(1.0, 0.0);
    c[1] = beta * c[0] / ch;
    for n in 1..ext {
        let nf = n as f64;
        c[n + 1] = (beta * c[n] - sh * nf.sqrt() * c[n - 1]) / (ch * (nf + 1.0).sqrt());
        let big = c[n + 1].norm();
        if big > 1e150 {
            let s = 1.0 / big;
            for v in c.iter_mut().take(n + 2) {
                *v *= s;
            }
        }
    }
    let total: f64 = c.iter().map(|v| v.norm_sqr()).sum();
    let kept: f64 = c[..=n_max].iter().map(|v| v.norm_sqr()).sum();
    let deficit = 1.0 - kept / total;
    if !(deficit <= budget) {
        return Err(Error::Truncation {
            n_max,
            deficit,
            budget,
        });
    }
    c.truncate(n_max + 1);
    let s = 1.0 / kept.sqrt();
    for v in &mut c {
        *v *= s;
    }
    Ok(FockState { amplitudes: c })
}

/// [`build_state`] starting from [`truncation_rule`] and doubling `n_max`
/// until the budget holds.
pub fn build_state_auto(xi: f64, beta: Complex64) -> Result<FockState> {
    let mut n = truncation_rule(xi, beta.norm());
    loop {
        match build_state(xi, beta, n) {
            Err(Error::Truncation { .. }) if 2 * n <= MAX_DIM => n *= 2,
            other => return other,
        }
    }
}

/// Smallest basis from the rule (doubled as needed) that holds the state.
pub fn rule_n_max(xi: f64, beta_mag: f64) -> Result<usize> {
    Ok(build_state_auto(xi, Complex64::new(beta_mag, 0.0))?.n_max())
}
