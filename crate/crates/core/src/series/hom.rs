//! Hom(M, gl(V)) for the two sl₂-modules that occur: M = sl₂ with the adjoint
//! action (basis n₀, h, n₀⁺) and M = U with the standard action twisted into
//! weight −1 (basis e, f with n₀e = f, he = e, hf = −f, n₀⁺f = e).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel, rat, ExactMatrix, Rational, Subspace, Vector, GR};
use crate::sl2::{isotypical, IsotypicalDecomposition, Sl2Rep, Sl2Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleKind {
    Sl2,
    U,
}

fn half_i() -> GR {
    GR::new(rat(0, 1), rat(1, 2))
}

impl ModuleKind {
    pub fn rank(self) -> usize {
        match self {
            ModuleKind::Sl2 => 3,
            ModuleKind::U => 2,
        }
    }

    /// Matrices of n₀, h, n₀⁺ on coefficient columns.
    pub fn action(self) -> [ExactMatrix; 3] {
        match self {
            ModuleKind::Sl2 => [
                ExactMatrix::from_ints(3, 3, &[0, 2, 0, 0, 0, -1, 0, 0, 0]),
                ExactMatrix::from_ints(3, 3, &[-2, 0, 0, 0, 0, 0, 0, 0, 2]),
                ExactMatrix::from_ints(3, 3, &[0, 0, 0, 1, 0, 0, 0, -2, 0]),
            ],
            ModuleKind::U => [
                ExactMatrix::from_ints(2, 2, &[0, 0, 1, 0]),
                ExactMatrix::from_ints(2, 2, &[1, 0, 0, -1]),
                ExactMatrix::from_ints(2, 2, &[0, 1, 0, 0]),
            ],
        }
    }

    /// Action matrices of x⁺, x⁻, z.
    pub fn xz_action(self) -> [ExactMatrix; 3] {
        let [n0, h, np] = self.action();
        let hh = h.scale_q(&rat(1, 2));
        let s = (&n0 + &np).scale(&half_i());
        [&hh + &s, &hh - &s, (&n0 - &np).scale(&GR::i())]
    }

    /// The Casimir 2x⁺x⁻ + 2x⁻x⁺ + z² on M is this scalar.
    pub fn casimir(self) -> i64 {
        match self {
            ModuleKind::Sl2 => 8,
            ModuleKind::U => 3,
        }
    }

    /// Hodge-homogeneous basis of M: x⁺, z, x⁻ of types (1,−1), (0,0),
    /// (−1,1), or ν± = e ± if of types (0,−1) and (−1,0).
    pub fn hodge_basis(self) -> Vec<(Vector, (i32, i32))> {
        let o = GR::from_int(0);
        let h = GR::from_frac(1, 2);
        match self {
            ModuleKind::Sl2 => vec![
                (vec![half_i(), h.clone(), half_i()], (1, -1)),
                (vec![GR::i(), o, -GR::i()], (0, 0)),
                (vec![-half_i(), h, -half_i()], (-1, 1)),
            ],
            ModuleKind::U => vec![
                (vec![GR::from_int(1), GR::i()], (0, -1)),
                (vec![GR::from_int(1), -GR::i()], (-1, 0)),
            ],
        }
    }
}

/// A linear map M → gl(V), stored by its values on the basis of M.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomMap {
    pub kind: ModuleKind,
    pub values: Vec<ExactMatrix>,
}

impl HomMap {
    pub fn zero(kind: ModuleKind, dim: usize) -> Self {
        Self { kind, values: vec![ExactMatrix::zeros(dim, dim); kind.rank()] }
    }

    /// Φ₀: n₀ ↦ N₀, h ↦ H, n₀⁺ ↦ N₀⁺.
    pub fn from_triple(t: &Sl2Triple) -> Self {
        Self { kind: ModuleKind::Sl2, values: vec![t.n0.clone(), t.h.clone(), t.n0_plus.clone()] }
    }

    pub fn dim(&self) -> usize {
        self.values[0].rows()
    }

    pub fn flat_len(&self) -> usize {
        self.kind.rank() * self.dim() * self.dim()
    }

    pub fn to_vec(&self) -> Vector {
        self.values.iter().flat_map(|v| v.entries().iter().cloned()).collect()
    }

    pub fn from_vec(kind: ModuleKind, dim: usize, v: &[GR]) -> Self {
        let n2 = dim * dim;
        Self { kind, values: (0..kind.rank()).map(|k| ExactMatrix::from_vec(dim, dim, v[k * n2..(k + 1) * n2].to_vec())).collect() }
    }

    /// The value on the element of M with the given coordinates.
    pub fn at(&self, coords: &[GR]) -> ExactMatrix {
        let d = self.dim();
        self.values.iter().zip(coords).fold(ExactMatrix::zeros(d, d), |acc, (v, c)| &acc + &v.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { kind: self.kind, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &GR) -> Self {
        Self { kind: self.kind, values: self.values.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn map(&self, f: impl Fn(&ExactMatrix) -> ExactMatrix) -> Self {
        Self { kind: self.kind, values: self.values.iter().map(f).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.is_real())
    }

    /// Frobenius norm of the stacked values.
    pub fn norm_f64(&self) -> f64 {
        self.values.iter().map(|v| v.frobenius_f64().powi(2)).sum::<f64>().sqrt()
    }
}

/// Q(A,B)(u) = 2[A(x⁺), B(x⁻.u)] + 2[A(x⁻), B(x⁺.u)] + [A(z), B(z.u)].
pub fn casimir_pairing(a: &HomMap, b: &HomMap) -> HomMap {
    assert_eq!(a.kind, ModuleKind::Sl2, "first argument of Q must be a map out of sl2");
    // Coordinates of x⁺, z, x⁻ in the basis n₀, h, n₀⁺.
    let hb = ModuleKind::Sl2.hodge_basis();
    let (a_plus, a_z, a_minus) = (a.at(&hb[0].0), a.at(&hb[1].0), a.at(&hb[2].0));
    let [bp, bm, bz] = b.kind.xz_action();
    let two = rat(2, 1);
    let values = (0..b.kind.rank())
        .map(|j| {
            let t1 = a_plus.commutator(&b.at(&bm.column(j))).scale_q(&two);
            let t2 = a_minus.commutator(&b.at(&bp.column(j))).scale_q(&two);
            let t3 = a_z.commutator(&b.at(&bz.column(j)));
            &(&t1 + &t2) + &t3
        })
        .collect();
    HomMap { kind: b.kind, values }
}

/// The matrix of a linear operator on Hom(M, gl(V)) in the flattened basis.
pub fn operator_matrix(kind: ModuleKind, dim: usize, op: impl Fn(&HomMap) -> HomMap) -> ExactMatrix {
    let len = kind.rank() * dim * dim;
    let cols: Vec<Vector> = (0..len)
        .map(|i| {
            let mut v = vec![GR::from_int(0); len];
            v[i] = GR::from_int(1);
            op(&HomMap::from_vec(kind, dim, &v)).to_vec()
        })
        .collect();
    ExactMatrix::from_columns(&cols)
}

/// Hom(M, gl(V)) with its two commuting sl₂-actions: the left action through
/// the values, and the diagonal action x.T = [Φ₀(x), T(·)] − T(x.·).
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub kind: ModuleKind,
    pub dim: usize,
    pub left: IsotypicalDecomposition,
    pub diagonal: IsotypicalDecomposition,
}

impl HomSpace {
    pub fn new(kind: ModuleKind, triple: &Sl2Triple) -> Result<Self> {
        let dim = triple.dim();
        let phi0 = [&triple.n0, &triple.h, &triple.n0_plus];
        let acts = kind.action();
        let left_op = |k: usize| operator_matrix(kind, dim, |t| t.map(|v| phi0[k].commutator(v)));
        let diag_op = |k: usize| {
            operator_matrix(kind, dim, |t| {
                let values = (0..kind.rank()).map(|j| &phi0[k].commutator(&t.values[j]) - &t.at(&acts[k].column(j))).collect();
                HomMap { kind, values }
            })
        };
        let left = isotypical(&Sl2Rep::new(left_op(0), left_op(1), left_op(2))?)?;
        let diagonal = isotypical(&Sl2Rep::new(diag_op(0), diag_op(1), diag_op(2))?)?;
        Ok(Self { kind, dim, left, diagonal })
    }

    pub fn flat_len(&self) -> usize {
        self.kind.rank() * self.dim * self.dim
    }

    /// Projection onto Hom(M, g(r)) ∩ (diagonal weight w).
    pub fn project(&self, r: u32, w: u32, v: &[GR]) -> Vector {
        self.left.project(r, &self.diagonal.project(w, v))
    }

    pub fn project_map(&self, r: u32, w: u32, t: &HomMap) -> HomMap {
        HomMap::from_vec(self.kind, self.dim, &self.project(r, w, &t.to_vec()))
    }

    /// Projection onto Hom(M, g(r)).
    pub fn project_left(&self, r: u32, t: &HomMap) -> HomMap {
        HomMap::from_vec(self.kind, self.dim, &self.left.project(r, &t.to_vec()))
    }

    pub fn component(&self, r: u32, w: u32) -> Subspace {
        let len = self.flat_len();
        let vecs = self.left.component(r).basis().iter().map(|b| self.diagonal.project(w, b)).collect();
        Subspace::span(len, vecs)
    }

    /// Matrix of the projection onto Hom(M, g(r)) ∩ (diagonal weight w).
    pub fn projector(&self, r: u32, w: u32) -> ExactMatrix {
        let len = self.flat_len();
        let cols: Vec<Vector> = (0..len)
            .map(|i| {
                let mut v = vec![GR::from_int(0); len];
                v[i] = GR::from_int(1);
                self.project(r, w, &v)
            })
            .collect();
        ExactMatrix::from_columns(&cols)
    }
}

/// Eigen-decomposition of a semisimple operator with rational spectrum drawn
/// from a known candidate list.
#[derive(Clone, Debug)]
pub struct Spectral {
    pub eigenvalues: Vec<Rational>,
    basis: ExactMatrix,
    inv: ExactMatrix,
}

impl Spectral {
    pub fn new(op: &ExactMatrix, candidates: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let n = op.rows();
        let mut cands: Vec<Rational> = candidates.into_iter().collect();
        cands.sort();
        cands.dedup();
        let mut eigenvalues = Vec::new();
        let mut cols = Vec::new();
        for lam in cands {
            let shifted = op - &ExactMatrix::scalar(n, GR::real(lam.clone()));
            for v in kernel(&shifted) {
                eigenvalues.push(lam.clone());
                cols.push(v);
            }
        }
        if cols.len() != n {
            return Err(Error::invariant(format!(
                "operator is not semisimple with the expected spectrum ({} of {} eigenvectors)",
                cols.len(),
                n
            )));
        }
        let basis = ExactMatrix::from_columns(&cols);
        let inv = basis.inverse().ok_or_else(|| Error::invariant("eigenvectors are dependent"))?;
        Ok(Self { eigenvalues, basis, inv })
    }

    pub fn multiplicities(&self) -> BTreeMap<Rational, usize> {
        let mut out = BTreeMap::new();
        for l in &self.eigenvalues {
            *out.entry(l.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn eigenspace(&self, lam: &Rational) -> Subspace {
        let cols = self.basis.columns();
        let vecs = self.eigenvalues.iter().zip(cols).filter(|(l, _)| *l == lam).map(|(_, c)| c).collect();
        Subspace::span(self.basis.rows(), vecs)
    }

    /// Solves (c − op)x = rhs. Returns the solution with no component in
    /// ker(c − op), together with the component of rhs in that kernel
    /// (which must vanish for solvability).
    pub fn solve_shifted(&self, c: &Rational, rhs: &[GR]) -> (Vector, Vector) {
        let coords = self.inv.apply(rhs);
        let mut x = vec![GR::from_int(0); coords.len()];
        let mut k = vec![GR::from_int(0); coords.len()];
        for (i, (lam, a)) in self.eigenvalues.iter().zip(coords).enumerate() {
            let mu = c - lam;
            if mu == Rational::from_integer(0.into()) {
                k[i] = a;
            } else {
                x[i] = a.scale(&mu.recip());
            }
        }
        (self.basis.apply(&x), self.basis.apply(&k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2() -> Sl2Triple {
        Sl2Triple::new(
            ExactMatrix::from_ints(2, 2, &[0, 0, 1, 0]),
            ExactMatrix::from_ints(2, 2, &[1, 0, 0, -1]),
            ExactMatrix::from_ints(2, 2, &[0, 1, 0, 0]),
        )
        .unwrap()
    }

    #[test]
    fn module_actions_are_representations() {
        for kind in [ModuleKind::Sl2, ModuleKind::U] {
            let [n0, h, np] = kind.action();
            assert!(Sl2Rep::new(n0, h, np).is_ok());
            let [xp, xm, z] = kind.xz_action();
            let two = rat(2, 1);
            assert_eq!(z.commutator(&xp), xp.scale_q(&two));
            assert_eq!(z.commutator(&xm), -xm.scale_q(&two));
            assert_eq!(xp.commutator(&xm), z);
            let cas = &(&(&xp * &xm).scale_q(&two) + &(&xm * &xp).scale_q(&two)) + &(&z * &z);
            assert_eq!(cas, ExactMatrix::scalar(kind.rank(), GR::from_int(kind.casimir())));
        }
    }

    #[test]
    fn zero_pairing() {
        let t = gl2();
        let b = HomMap::from_triple(&t);
        assert!(casimir_pairing(&HomMap::zero(ModuleKind::Sl2, 2), &b).is_zero());
    }

    #[test]
    fn phi0_is_a_fixed_point() {
        let t = gl2();
        let p = HomMap::from_triple(&t);
        assert_eq!(casimir_pairing(&p, &p).scale(&GR::from_frac(1, 8)), p);
    }

    #[test]
    fn hom_space_dimensions() {
        let t = gl2();
        let s = HomSpace::new(ModuleKind::U, &t).unwrap();
        // gl(2) = g(0) ⊕ g(2); Hom(U, g(2)) = S(3) ⊕ S(1).
        assert_eq!(s.component(2, 3).dim(), 4);
        assert_eq!(s.component(2, 1).dim(), 2);
        assert_eq!(s.component(0, 1).dim(), 2);
    }
}
