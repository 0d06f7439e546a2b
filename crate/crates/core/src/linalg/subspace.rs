//! Subspaces of ℚ(i)ⁿ in canonical reduced row echelon form.

use std::fmt;

use num_traits::Zero;

use super::gaussian::GR;
use super::matrix::{vec_conj, vec_is_zero, ExactMatrix, Vector};
use super::solve::{kernel, rref, solve_linear};
use crate::error::{Error, Result};

/// A subspace stored by its reduced row echelon basis, so that structural
/// equality is equality of subspaces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| super::matrix::unit_vector(ambient, i)).collect())
    }

    pub fn span(ambient: usize, vectors: Vec<Vector>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector of wrong length in span");
        let vectors: Vec<Vector> = vectors.into_iter().filter(|v| !vec_is_zero(v)).collect();
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let (basis, pivots) = rref(vectors);
        Self { ambient, basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::invalid(format!(
                "ambient dimension mismatch: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn contains(&self, v: &[GR]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Remainder of `v` after clearing the pivot coordinates with the basis.
    pub fn reduce(&self, v: &[GR]) -> Vector {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (k, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    w[k] -= &(&f * x);
                }
            }
        }
        w
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[GR]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Ok(Self::span(self.ambient, v))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        // Solve Σ aᵢ uᵢ − Σ bⱼ wⱼ = 0.
        let a = self.basis.len();
        let mut cols: Vec<Vector> = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| w.iter().map(|x| -x).collect()));
        let m = ExactMatrix::from_columns(&cols);
        let vecs = kernel(&m)
            .into_iter()
            .map(|k| {
                let mut v = vec![GR::zero(); self.ambient];
                for (c, u) in k[..a].iter().zip(&self.basis) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(u) {
                        *x += &(c * y);
                    }
                }
                v
            })
            .collect();
        Ok(Self::span(self.ambient, vecs))
    }

    pub fn conj(&self) -> Self {
        Self::span(self.ambient, self.basis.iter().map(|v| vec_conj(v)).collect())
    }

    pub fn is_conj_invariant(&self) -> bool {
        self.basis.iter().all(|v| self.contains(&vec_conj(v)))
    }

    pub fn image(&self, m: &ExactMatrix) -> Self {
        Self::span(m.rows(), self.basis.iter().map(|v| m.apply(v)).collect())
    }

    /// {v : M v ∈ target}.
    pub fn preimage(m: &ExactMatrix, target: &Self) -> Self {
        // Compose M with a map whose kernel is `target`: the non-pivot
        // coordinates after reduction.
        let n = m.cols();
        let vecs: Vec<Vector> = (0..n)
            .map(|j| target.reduce(&m.column(j)))
            .collect();
        let free: Vec<usize> = (0..target.ambient).filter(|c| !target.pivots.contains(c)).collect();
        let q = ExactMatrix::from_rows(
            free.iter().map(|&r| vecs.iter().map(|v| v[r].clone()).collect()).collect(),
        );
        if free.is_empty() {
            return Self::full(n);
        }
        Self::span(n, kernel(&q))
    }

    /// The canonical complement of `self` inside `outer`: vectors of `outer`
    /// with zero entries at the pivot columns of `self`. Requires self ⊆ outer.
    pub fn complement_in(&self, outer: &Self) -> Result<Self> {
        self.check(outer)?;
        if !self.is_subspace_of(outer) {
            return Err(Error::invariant("complement_in: subspace not contained in outer space"));
        }
        let reduced: Vec<Vector> = outer.basis.iter().map(|v| self.reduce(v)).collect();
        let c = Self::span(self.ambient, reduced);
        debug_assert_eq!(c.dim() + self.dim(), outer.dim());
        Ok(c)
    }

    /// Real basis of a conjugation-invariant subspace.
    pub fn real_basis(&self) -> Option<Vec<Vector>> {
        if !self.is_conj_invariant() {
            return None;
        }
        let mut candidates = Vec::new();
        for v in &self.basis {
            let re: Vector = v.iter().map(|x| GR::real(x.re.clone())).collect();
            let im: Vector = v.iter().map(|x| GR::real(x.im.clone())).collect();
            candidates.push(re);
            candidates.push(im);
        }
        let mut chosen: Vec<Vector> = Vec::new();
        let mut acc = Self::zero(self.ambient);
        for c in candidates {
            if vec_is_zero(&c) || acc.contains(&c) {
                continue;
            }
            acc = Self::span(self.ambient, {
                let mut b = acc.basis.clone();
                b.push(c.clone());
                b
            });
            chosen.push(c);
            if chosen.len() == self.dim() {
                break;
            }
        }
        Some(chosen)
    }

    /// Basis vectors as the columns of an ambient × dim matrix.
    pub fn basis_matrix(&self) -> ExactMatrix {
        if self.basis.is_empty() {
            return ExactMatrix::zeros(self.ambient, 0);
        }
        ExactMatrix::from_columns(&self.basis)
    }

    /// Matrix of `m` restricted to this subspace, in the canonical basis.
    /// None when the subspace is not invariant.
    pub fn restrict(&self, m: &ExactMatrix) -> Option<ExactMatrix> {
        let d = self.dim();
        let mut out = ExactMatrix::zeros(d, d);
        for (j, v) in self.basis.iter().enumerate() {
            let c = self.coordinates(&m.apply(v))?;
            for (i, x) in c.into_iter().enumerate() {
                out[(i, j)] = x;
            }
        }
        Some(out)
    }

    /// Solves for coefficients expressing `v` in an arbitrary spanning list.
    pub fn coefficients_in(vectors: &[Vector], v: &[GR]) -> Option<Vector> {
        if vectors.is_empty() {
            return if vec_is_zero(v) { Some(Vec::new()) } else { None };
        }
        solve_linear(&ExactMatrix::from_columns(vectors), v).0
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (k, v) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        write!(f, "}} in dim {}", self.ambient)
    }
}

/// Checks that the given subspaces form a direct sum decomposition of the
/// ambient space.
pub fn is_direct_sum_decomposition(parts: &[&Subspace], ambient: usize) -> bool {
    let total: usize = parts.iter().map(|s| s.dim()).sum();
    if total != ambient {
        return false;
    }
    let all: Vec<Vector> = parts.iter().flat_map(|s| s.basis().iter().cloned()).collect();
    Subspace::span(ambient, all).dim() == ambient
}
