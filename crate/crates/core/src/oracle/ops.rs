//! Sparse operators on a truncated number basis.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C = Complex64;

/// Operator stored as a list of nonzero entries `(row, col, value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    dim: usize,
    entries: Vec<(usize, usize, C)>,
}

impl SparseOp {
    fn from_map(dim: usize, map: BTreeMap<(usize, usize), C>) -> Self {
        let entries = map
            .into_iter()
            .filter(|(_, v)| *v != C::new(0.0, 0.0))
            .map(|((i, j), v)| (i, j, v))
            .collect();
        SparseOp { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim).map(|i| (i, i, C::new(1.0, 0.0))).collect();
        SparseOp { dim, entries }
    }

    /// Truncated `a` with `a|n⟩ = √n |n−1⟩`.
    pub fn annihilation(dim: usize) -> Self {
        let entries = (1..dim)
            .map(|n| (n - 1, n, C::new((n as f64).sqrt(), 0.0)))
            .collect();
        SparseOp { dim, entries }
    }

    pub fn number(dim: usize) -> Self {
        let entries = (1..dim).map(|n| (n, n, C::new(n as f64, 0.0))).collect();
        SparseOp { dim, entries }
    }

    pub fn adjoint(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&(i, j, v)| (j, i, v.conj()))
            .collect();
        SparseOp {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, c: C) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&(i, j, v)| (i, j, v * c))
            .collect();
        SparseOp::from_map(self.dim, collect(entries))
    }

    pub fn add(&self, other: &SparseOp) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut map = collect(self.entries.clone());
        for &(i, j, v) in &other.entries {
            *map.entry((i, j)).or_default() += v;
        }
        SparseOp::from_map(self.dim, map)
    }

    pub fn mul(&self, other: &SparseOp) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut rows: Vec<Vec<(usize, C)>> = vec![Vec::new(); self.dim];
        for &(k, j, v) in &other.entries {
            rows[k].push((j, v));
        }
        let mut map = BTreeMap::new();
        for &(i, k, u) in &self.entries {
            for &(j, v) in &rows[k] {
                *map.entry((i, j)).or_insert(C::new(0.0, 0.0)) += u * v;
            }
        }
        SparseOp::from_map(self.dim, map)
    }

    /// `out += coef · A ψ`.
    pub fn apply_into(&self, psi: &[C], coef: C, out: &mut [C]) {
        for &(i, j, v) in &self.entries {
            out[i] += coef * v * psi[j];
        }
    }

    pub fn apply(&self, psi: &[C]) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); psi.len()];
        self.apply_into(psi, C::new(1.0, 0.0), &mut out);
        out
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &[C]) -> C {
        self.entries
            .iter()
            .map(|&(i, j, v)| psi[i].conj() * v * psi[j])
            .sum()
    }

    /// `out += coef · A ρ`.
    pub fn left_into(&self, rho: &DMatrix<C>, coef: C, out: &mut DMatrix<C>) {
        let n = rho.ncols();
        for &(i, j, v) in &self.entries {
            let w = coef * v;
            for k in 0..n {
                out[(i, k)] += w * rho[(j, k)];
            }
        }
    }

    /// `out += coef · ρ A`.
    pub fn right_into(&self, rho: &DMatrix<C>, coef: C, out: &mut DMatrix<C>) {
        let n = rho.nrows();
        for &(i, j, v) in &self.entries {
            let w = coef * v;
            for k in 0..n {
                out[(k, j)] += w * rho[(k, i)];
            }
        }
    }

    /// `Tr(ρ A)`.
    pub fn trace_with(&self, rho: &DMatrix<C>) -> C {
        self.entries.iter().map(|&(i, j, v)| v * rho[(j, i)]).sum()
    }

    pub fn to_dense(&self) -> DMatrix<C> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }
}

fn collect(entries: Vec<(usize, usize, C)>) -> BTreeMap<(usize, usize), C> {
    let mut map = BTreeMap::new();
    for (i, j, v) in entries {
        *map.entry((i, j)).or_insert(C::new(0.0, 0.0)) += v;
    }
    map
}

/// `Q(θ) = (a e^{−iθ} + a† e^{iθ})/2`.
pub fn quadrature_op(a: &SparseOp, theta: f64) -> SparseOp {
    let e = C::from_polar(0.5, -theta);
    a.scale(e).add(&a.adjoint().scale(e.conj()))
}
