//! Steady state of the driven, damped cavity by long-time integration of
//! the master equation.
//!
//! Drive and loss act on the Bogoliubov mode `ĉ = a cosh ξ + a† sinh ξ`,
//! which annihilates the squeezed ground state. In the frame rotating at
//! `ω_d` the generator is time independent:
//!
//! ```text
//! H_rot = ω a†a − (g²/4Ω)(a + a†)² − ω_d ĉ†ĉ + η(ĉ + ĉ†),   L = √κ ĉ
//! ```
//!
//! Lab-frame moments at time t use `a(t) = ĉ e^{−iω_d t} cosh ξ − ĉ† e^{iω_d t} sinh ξ`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::ops::{quadrature_op, SparseOp, C};
use crate::error::{domain, Error, Result};
use crate::fisher_dd::DrivenDissipativeParams;

pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Convergence threshold on the trace-norm change per unit time.
pub const STEADY_TOL: f64 = 1e-10;
/// Oracle validity window in `g/g_c`.
pub const ORACLE_MAX_RATIO: f64 = 0.5;
const MAX_STEPS: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C>,
}

impl DensityMatrix {
    /// Check hermiticity, unit trace and positivity.
    pub fn new(entries: DMatrix<C>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() < 2 {
            return Err(domain("density matrix must be square with dimension >= 2"));
        }
        let herm = (&entries - entries.adjoint()).norm();
        if herm > 1e-9 {
            return Err(Error::Internal(format!(
                "density matrix not hermitian ({herm:e})"
            )));
        }
        let rho = DensityMatrix { entries };
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Internal(format!("density matrix trace {tr}")));
        }
        let lo = rho.min_eigenvalue();
        if lo < -POSITIVITY_TOL {
            return Err(Error::Internal(format!("density matrix eigenvalue {lo:e}")));
        }
        Ok(rho)
    }

    pub fn n_max(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn entries(&self) -> &DMatrix<C> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.entries + self.entries.adjoint()) * C::new(0.5, 0.0);
        SymmetricEigen::new(h)
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn expectation(&self, op: &SparseOp) -> C {
        op.trace_with(&self.entries)
    }

    /// Mean and variance of `(A e^{−iθ} + A† e^{iθ})/2` for a given
    /// annihilation-type operator `A`.
    pub fn quadrature_stats(&self, a: &SparseOp, theta: f64) -> (f64, f64) {
        let q = quadrature_op(a, theta);
        let m = self.expectation(&q).re;
        (m, self.expectation(&q.mul(&q)).re - m * m)
    }
}

#[derive(Debug, Clone)]
pub struct LindbladRun {
    /// Rotating-frame steady state.
    pub rho: DensityMatrix,
    /// Final trace-norm bound on `dρ/dt`.
    pub residual: f64,
    /// Integrated time.
    pub time: f64,
    pub steps: usize,
    bogoliubov: SparseOp,
    xi: f64,
}

/// Lab-frame quadrature moments of the steady state at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

impl LindbladRun {
    /// `a(t)` expressed through the rotating-frame operators.
    pub fn lab_annihilation(&self, omega_d: f64, t: f64) -> SparseOp {
        let c = &self.bogoliubov;
        let e = C::from_polar(1.0, -omega_d * t);
        c.scale(e * self.xi.cosh())
            .add(&c.adjoint().scale(-e.conj() * self.xi.sinh()))
    }

    pub fn moments(&self, params: &DrivenDissipativeParams) -> SteadyMoments {
        let a = self.lab_annihilation(params.omega_d, params.t);
        let (mean_x, var_x) = self.rho.quadrature_stats(&a, 0.0);
        let (mean_p, var_p) = self.rho.quadrature_stats(&a, std::f64::consts::FRAC_PI_2);
        SteadyMoments {
            mean_x,
            mean_p,
            var_x,
            var_p,
        }
    }
}

/// `y += a x`.
fn axpy(y: &mut DMatrix<C>, a: C, x: &DMatrix<C>) {
    for (u, v) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *u += a * v;
    }
}

fn row_sum_bound(op: &SparseOp) -> f64 {
    let d = op.to_dense();
    (0..d.nrows())
        .map(|i| d.row(i).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Integrate from the vacuum until `√d ‖L(ρ)‖_F < STEADY_TOL`.
pub fn lindblad_run(params: &DrivenDissipativeParams, n_max: usize) -> Result<LindbladRun> {
    params.validate()?;
    let b = &params.base;
    if b.coupling_ratio() > ORACLE_MAX_RATIO {
        return Err(domain(format!(
            "g/g_c = {} outside the oracle window (<= {ORACLE_MAX_RATIO})",
            b.coupling_ratio()
        )));
    }
    if n_max < 2 {
        return Err(domain("n_max must be at least 2"));
    }
    let dim = n_max + 1;
    let xi = b.xi();
    let a = SparseOp::annihilation(dim);
    let ad = a.adjoint();
    let c = a
        .scale(C::new(xi.cosh(), 0.0))
        .add(&ad.scale(C::new(xi.sinh(), 0.0)));
    let cd = c.adjoint();
    let cdc = cd.mul(&c);
    let x2 = a.add(&ad);
    let r2 = b.coupling_ratio().powi(2);
    let h = ad
        .mul(&a)
        .scale(C::new(b.omega, 0.0))
        .add(&x2.mul(&x2).scale(C::new(-r2 * b.omega / 4.0, 0.0)))
        .add(&cdc.scale(C::new(-params.omega_d, 0.0)))
        .add(&c.add(&cd).scale(C::new(params.eta, 0.0)));
    let kappa = params.kappa;
    let h_eff = h.add(&cdc.scale(C::new(0.0, -0.5 * kappa)));
    let h_eff_dag = h_eff.adjoint();

    let rhs = |rho: &DMatrix<C>, out: &mut DMatrix<C>, scratch: &mut DMatrix<C>| {
        out.fill(C::new(0.0, 0.0));
        h_eff.left_into(rho, C::new(0.0, -1.0), out);
        h_eff_dag.right_into(rho, C::new(0.0, 1.0), out);
        scratch.fill(C::new(0.0, 0.0));
        c.left_into(rho, C::new(kappa, 0.0), scratch);
        cd.right_into(scratch, C::new(1.0, 0.0), out);
    };

    let dt = 1.0 / (2.0 * row_sum_bound(&h_eff) + kappa * row_sum_bound(&c).powi(2));
    let mut rho = DMatrix::<C>::zeros(dim, dim);
    rho[(0, 0)] = C::new(1.0, 0.0);
    let z = DMatrix::<C>::zeros(dim, dim);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp, mut scratch) =
        (z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z);
    let scale = (dim as f64).sqrt();
    let mut residual = f64::INFINITY;
    for step in 0..MAX_STEPS {
        rhs(&rho, &mut k1, &mut scratch);
        residual = scale * k1.norm();
        if residual < STEADY_TOL {
            let herm = (&rho + rho.adjoint()) * C::new(0.5, 0.0);
            return Ok(LindbladRun {
                rho: DensityMatrix::new(herm)?,
                residual,
                time: step as f64 * dt,
                steps: step,
                bogoliubov: c,
                xi,
            });
        }
        tmp.copy_from(&rho);
        axpy(&mut tmp, C::new(0.5 * dt, 0.0), &k1);
        rhs(&tmp, &mut k2, &mut scratch);
        tmp.copy_from(&rho);
        axpy(&mut tmp, C::new(0.5 * dt, 0.0), &k2);
        rhs(&tmp, &mut k3, &mut scratch);
        tmp.copy_from(&rho);
        axpy(&mut tmp, C::new(dt, 0.0), &k3);
        rhs(&tmp, &mut k4, &mut scratch);
        k2 += &k3;
        axpy(&mut k1, C::new(2.0, 0.0), &k2);
        k1 += &k4;
        axpy(&mut rho, C::new(dt / 6.0, 0.0), &k1);
    }
    Err(Error::NonConvergence {
        iterations: MAX_STEPS,
        residual,
    })
}

pub fn lindblad_steady(params: &DrivenDissipativeParams, n_max: usize) -> Result<DensityMatrix> {
    Ok(lindblad_run(params, n_max)?.rho)
}
