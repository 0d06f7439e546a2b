//! The Deligne bigrading, gradings of W and adapted frames for gl(V).

use std::collections::BTreeMap;

use num_traits::Zero;

use super::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::error::{Error, Result};
use crate::linalg::{is_direct_sum_decomposition, ExactMatrix, Subspace, Vector, GR};

/// V = ⊕ I^{p,q}; only nonzero summands are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bigrading {
    dim: usize,
    parts: BTreeMap<(i32, i32), Subspace>,
}

impl Bigrading {
    pub fn from_parts(dim: usize, parts: BTreeMap<(i32, i32), Subspace>) -> Result<Self> {
        let parts: BTreeMap<_, _> = parts.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        let refs: Vec<&Subspace> = parts.values().collect();
        if !is_direct_sum_decomposition(&refs, dim) {
            return Err(Error::invalid("I^{p,q} do not form a direct sum decomposition of V"));
        }
        Ok(Self { dim, parts })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &BTreeMap<(i32, i32), Subspace> {
        &self.parts
    }

    pub fn get(&self, p: i32, q: i32) -> Subspace {
        self.parts.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    /// Hodge numbers h^{p,q} = dim I^{p,q}.
    pub fn hodge_numbers(&self) -> BTreeMap<(i32, i32), usize> {
        self.parts.iter().map(|(k, s)| (*k, s.dim())).collect()
    }

    /// Sum of the I^{p,q} satisfying `pred`.
    pub fn sum_where(&self, pred: impl Fn(i32, i32) -> bool) -> Subspace {
        let vecs = self
            .parts
            .iter()
            .filter(|((p, q), _)| pred(*p, *q))
            .flat_map(|(_, s)| s.basis().iter().cloned())
            .collect();
        Subspace::span(self.dim, vecs)
    }

    /// Adapted basis (columns) with the type of each column.
    pub fn frame(&self) -> Frame {
        let mut cols = Vec::new();
        let mut labels = Vec::new();
        for ((p, q), s) in &self.parts {
            for v in s.basis() {
                cols.push(v.clone());
                labels.push((*p, *q));
            }
        }
        Frame::new(&cols, labels)
    }

    /// The grading with E_k = ⊕_{p+q=k} I^{p,q}.
    pub fn grading(&self) -> Grading {
        let mut eig: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
        for ((p, q), s) in &self.parts {
            eig.entry(p + q).or_default().extend(s.basis().iter().cloned());
        }
        Grading::from_eigenvectors(self.dim, eig)
    }

    /// Split over ℝ: conj(I^{p,q}) = I^{q,p}.
    pub fn is_split(&self) -> bool {
        self.parts.iter().all(|((p, q), s)| s.conj() == self.get(*q, *p))
    }

    pub fn transform(&self, g: &ExactMatrix) -> Self {
        Self { dim: self.dim, parts: self.parts.iter().map(|(k, s)| (*k, s.image(g))).collect() }
    }

    /// Checks Thm-2.4-type properties (a)–(c) against (F, W).
    pub fn verify(&self, f: &DecreasingFiltration, w: &IncreasingFiltration) -> Result<()> {
        let (pmin, pmax) = index_range(f);
        for p in pmin..=pmax + 1 {
            if self.sum_where(|a, _| a >= p) != f.get(p) {
                return Err(Error::invalid(format!("bigrading does not recover F^{}", p)));
            }
        }
        if let (Some(lo), Some(hi)) = (w.min_weight(), w.max_weight()) {
            for k in lo - 1..=hi {
                if self.sum_where(|a, b| a + b <= k) != w.get(k) {
                    return Err(Error::invalid(format!("bigrading does not recover W_{}", k)));
                }
            }
        }
        for ((p, q), s) in &self.parts {
            let (p, q) = (*p, *q);
            let target = self.sum_where(|r, t| (r == q && t == p) || (r < q && t < p));
            if !s.conj().is_subspace_of(&target) {
                return Err(Error::invalid(format!("conj(I^{{{},{}}}) fails the congruence", p, q)));
            }
        }
        Ok(())
    }
}

fn index_range(f: &DecreasingFiltration) -> (i32, i32) {
    (f.min_index().unwrap_or(0), f.max_index().unwrap_or(0))
}

/// The bigrading of a mixed Hodge structure, from the closed formula
/// I^{p,q} = F^p ∩ W_{p+q} ∩ (F̄^q ∩ W_{p+q} + Σ_{j>0} F̄^{q−j} ∩ W_{p+q−1−j}).
pub fn deligne_bigrading(f: &DecreasingFiltration, w: &IncreasingFiltration) -> Result<Bigrading> {
    let n = f.dim();
    if w.dim() != n {
        return Err(Error::invalid("F and W live on spaces of different dimension"));
    }
    let fbar = f.conj();
    let (pmin, pmax) = index_range(f);
    let (wmin, wmax) = (w.min_weight().unwrap_or(0), w.max_weight().unwrap_or(0));
    let mut parts = BTreeMap::new();
    for p in pmin..=pmax {
        for q in pmin..=pmax {
            let k = p + q;
            if k < wmin || k > wmax {
                continue;
            }
            let wk = w.get(k);
            let fp_w = f.get(p).intersect(&wk)?;
            if fp_w.is_zero() {
                continue;
            }
            let mut inner = fbar.get(q).intersect(&wk)?;
            let mut j = 1;
            while k - 1 - j >= wmin - 1 {
                let term = fbar.get(q - j).intersect(&w.get(k - 1 - j))?;
                inner = inner.sum(&term)?;
                j += 1;
            }
            let ipq = fp_w.intersect(&inner)?;
            if !ipq.is_zero() {
                parts.insert((p, q), ipq);
            }
        }
    }
    let bg = Bigrading::from_parts(n, parts)
        .map_err(|_| Error::invalid("(F, W) is not a mixed Hodge structure: the bigrading formula does not give a direct sum"))?;
    bg.verify(f, w).map_err(|e| Error::invalid(format!("(F, W) is not a mixed Hodge structure: {}", e)))?;
    Ok(bg)
}

/// The grading Y_{(F,W)}.
pub fn grading_of(f: &DecreasingFiltration, w: &IncreasingFiltration) -> Result<Grading> {
    Ok(deligne_bigrading(f, w)?.grading())
}

/// A semisimple endomorphism with integer eigenvalues, kept with its
/// eigenspaces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Grading {
    pub y: ExactMatrix,
    pub eigenspaces: BTreeMap<i32, Subspace>,
}

impl Grading {
    pub fn from_eigenvectors(dim: usize, eig: BTreeMap<i32, Vec<Vector>>) -> Self {
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut eigenspaces = BTreeMap::new();
        for (k, vs) in eig {
            let s = Subspace::span(dim, vs);
            if s.is_zero() {
                continue;
            }
            for v in s.basis() {
                cols.push(v.clone());
                vals.push(GR::from_int(k as i64));
            }
            eigenspaces.insert(k, s);
        }
        let b = ExactMatrix::from_columns(&cols);
        let binv = b.inverse().expect("eigenvectors of a grading must form a basis");
        let y = &(&b * &ExactMatrix::diag(&vals)) * &binv;
        Self { y, eigenspaces }
    }

    /// Recovers eigenspaces of a matrix known to be semisimple with integer
    /// spectrum inside `candidates`.
    pub fn from_matrix(y: &ExactMatrix, candidates: impl IntoIterator<Item = i32>) -> Result<Self> {
        let n = y.rows();
        let mut eigenspaces = BTreeMap::new();
        let mut total = 0;
        for k in candidates {
            let m = y - &ExactMatrix::scalar(n, GR::from_int(k as i64));
            let ker = crate::linalg::kernel(&m);
            if !ker.is_empty() {
                total += ker.len();
                eigenspaces.insert(k, Subspace::span(n, ker));
            }
        }
        if total != n {
            return Err(Error::invariant("matrix is not semisimple with the expected integer spectrum"));
        }
        Ok(Self { y: y.clone(), eigenspaces })
    }

    pub fn dim(&self) -> usize {
        self.y.rows()
    }

    pub fn eigenspace(&self, k: i32) -> Subspace {
        self.eigenspaces.get(&k).cloned().unwrap_or_else(|| Subspace::zero(self.dim()))
    }

    pub fn eigenvalues(&self) -> Vec<i32> {
        self.eigenspaces.keys().copied().collect()
    }

    /// W_k = W_{k−1} ⊕ E_k(Y) for all k.
    pub fn grades(&self, w: &IncreasingFiltration) -> bool {
        let mut ks: Vec<i32> = w.weights();
        ks.extend(self.eigenvalues());
        ks.sort();
        ks.dedup();
        ks.iter().all(|&k| {
            let e = self.eigenspace(k);
            let lower = w.get(k - 1);
            e.intersect(&lower).map(|s| s.is_zero()).unwrap_or(false)
                && lower.sum(&e).map(|s| s == w.get(k)).unwrap_or(false)
        })
    }

    /// Eigenbasis frame, labels (k, 0).
    pub fn frame(&self) -> Frame {
        let mut cols = Vec::new();
        let mut labels = Vec::new();
        for (k, s) in &self.eigenspaces {
            for v in s.basis() {
                cols.push(v.clone());
                labels.push((*k, 0));
            }
        }
        Frame::new(&cols, labels)
    }

    pub fn conj(&self) -> Self {
        Self {
            y: self.y.conj(),
            eigenspaces: self.eigenspaces.iter().map(|(k, s)| (*k, s.conj())).collect(),
        }
    }

    pub fn conjugate_by(&self, g: &ExactMatrix, g_inv: &ExactMatrix) -> Self {
        Self {
            y: self.y.conjugate_by(g, g_inv),
            eigenspaces: self.eigenspaces.iter().map(|(k, s)| (*k, s.image(g))).collect(),
        }
    }
}

/// Common eigenframe of two commuting gradings, labels (a-weight, b-weight).
pub fn joint_frame(a: &Grading, b: &Grading) -> Result<Frame> {
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for (k, sa) in &a.eigenspaces {
        for (l, sb) in &b.eigenspaces {
            for v in sa.intersect(sb)?.basis() {
                cols.push(v.clone());
                labels.push((*k, *l));
            }
        }
    }
    if cols.len() != a.dim() {
        return Err(Error::invariant("gradings do not commute: no common eigenframe"));
    }
    Ok(Frame::new(&cols, labels))
}

/// A basis of V with an integer pair attached to each vector. Endomorphisms
/// are decomposed by the label difference between target and source.
#[derive(Clone, Debug)]
pub struct Frame {
    pub b: ExactMatrix,
    pub b_inv: ExactMatrix,
    pub labels: Vec<(i32, i32)>,
}

impl Frame {
    pub fn new(cols: &[Vector], labels: Vec<(i32, i32)>) -> Self {
        let b = ExactMatrix::from_columns(cols);
        let b_inv = b.inverse().expect("frame vectors must form a basis");
        Self { b, b_inv, labels }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Coordinates of X in the frame.
    pub fn to_frame(&self, x: &ExactMatrix) -> ExactMatrix {
        &(&self.b_inv * x) * &self.b
    }

    pub fn from_frame(&self, x: &ExactMatrix) -> ExactMatrix {
        &(&self.b * x) * &self.b_inv
    }

    /// Type of the elementary map from frame vector j to frame vector i.
    pub fn entry_type(&self, i: usize, j: usize) -> (i32, i32) {
        let (a, b) = self.labels[i];
        let (c, d) = self.labels[j];
        (a - c, b - d)
    }

    /// Keeps the frame entries whose type satisfies `pred`.
    pub fn project(&self, x: &ExactMatrix, pred: impl Fn(i32, i32) -> bool) -> ExactMatrix {
        let mut m = self.to_frame(x);
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let (r, s) = self.entry_type(i, j);
                if !pred(r, s) {
                    m[(i, j)] = GR::zero();
                }
            }
        }
        self.from_frame(&m)
    }

    pub fn component(&self, x: &ExactMatrix, r: i32, s: i32) -> ExactMatrix {
        self.project(x, |a, b| a == r && b == s)
    }

    /// Component of ad-weight w for a grading frame (labels (k, 0)).
    pub fn ad_component(&self, x: &ExactMatrix, w: i32) -> ExactMatrix {
        self.project(x, |a, _| a == w)
    }

    /// All (r, s) with a nonzero component of X.
    pub fn support(&self, x: &ExactMatrix) -> Vec<(i32, i32)> {
        let m = self.to_frame(x);
        let mut out: Vec<(i32, i32)> = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !m[(i, j)].is_zero() {
                    let t = self.entry_type(i, j);
                    if !out.contains(&t) {
                        out.push(t);
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn lies_in(&self, x: &ExactMatrix, pred: impl Fn(i32, i32) -> bool) -> bool {
        self.support(x).into_iter().all(|(r, s)| pred(r, s))
    }

    /// Basis of the span of elementary frame maps with type satisfying `pred`.
    pub fn basis_where(&self, pred: impl Fn(i32, i32) -> bool) -> Vec<ExactMatrix> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (r, s) = self.entry_type(i, j);
                if pred(r, s) {
                    out.push(self.from_frame(&ExactMatrix::e(n, i, j)));
                }
            }
        }
        out
    }

    /// All types (r, s) occurring among elementary maps.
    pub fn types(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let t = self.entry_type(i, j);
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        out.sort();
        out
    }
}

/// The induced bigrading of gl(V) and its distinguished subalgebras.
#[derive(Clone, Debug)]
pub struct GlBigrading {
    pub frame: Frame,
}

impl GlBigrading {
    /// gl^{r,s} = {X : X I^{p,q} ⊆ I^{p+r,q+s}}.
    pub fn component(&self, x: &ExactMatrix, r: i32, s: i32) -> ExactMatrix {
        self.frame.component(x, r, s)
    }

    /// n₊ = ⊕_{r≥0, s<0}.
    pub fn n_plus(&self, x: &ExactMatrix) -> ExactMatrix {
        self.frame.project(x, |r, s| r >= 0 && s < 0)
    }

    /// n₀ = gl^{0,0}.
    pub fn n_zero(&self, x: &ExactMatrix) -> ExactMatrix {
        self.frame.component(x, 0, 0)
    }

    /// n₋ = ⊕_{r<0, s≥0}.
    pub fn n_minus(&self, x: &ExactMatrix) -> ExactMatrix {
        self.frame.project(x, |r, s| r < 0 && s >= 0)
    }

    /// Λ = ⊕_{r<0, s<0}.
    pub fn lambda(&self, x: &ExactMatrix) -> ExactMatrix {
        self.frame.project(x, |r, s| r < 0 && s < 0)
    }

    /// t_F = ⊕_{r<0} gl^{r,s}.
    pub fn tangent(&self, x: &ExactMatrix) -> ExactMatrix {
        self.frame.project(x, |r, _| r < 0)
    }

    pub fn lambda_basis(&self) -> Vec<ExactMatrix> {
        self.frame.basis_where(|r, s| r < 0 && s < 0)
    }

    pub fn dims(&self) -> BTreeMap<(i32, i32), usize> {
        let n = self.frame.dim();
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                *out.entry(self.frame.entry_type(i, j)).or_insert(0) += 1;
            }
        }
        out
    }
}

pub fn gl_bigrading(bg: &Bigrading) -> GlBigrading {
    GlBigrading { frame: bg.frame() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector;
    use num_traits::One;

    fn hodge_tate(c: GR) -> (DecreasingFiltration, IncreasingFiltration) {
        let mut w = BTreeMap::new();
        w.insert(-2, vec![unit_vector(2, 1)]);
        w.insert(0, vec![unit_vector(2, 0)]);
        let w = IncreasingFiltration::from_graded(2, &w).unwrap();
        let mut f = BTreeMap::new();
        f.insert(0, Subspace::span(2, vec![vec![GR::from_int(1), c]]));
        (DecreasingFiltration::new(2, f).unwrap(), w)
    }

    #[test]
    fn hodge_tate_bigrading_and_grading() {
        let c = GR::new(crate::linalg::rat(2, 3), crate::linalg::rat(1, 1));
        let (f, w) = hodge_tate(c.clone());
        let bg = deligne_bigrading(&f, &w).unwrap();
        assert_eq!(bg.get(0, 0), Subspace::span(2, vec![vec![GR::from_int(1), c.clone()]]));
        assert_eq!(bg.get(-1, -1), Subspace::span(2, vec![unit_vector(2, 1)]));
        let y = bg.grading();
        assert!(y.y.apply(&[GR::from_int(1), c]).iter().all(|x| x.is_zero()));
        assert_eq!(y.y.apply(&unit_vector(2, 1)), vec![GR::zero(), GR::from_int(-2)]);
        assert!(y.grades(&w));
        let gl = gl_bigrading(&bg);
        assert_eq!(gl.lambda_basis().len(), 1);
        assert_eq!(gl.lambda(&ExactMatrix::e(2, 1, 0)), ExactMatrix::e(2, 1, 0));
    }

    #[test]
    fn pure_weight_one() {
        // I^{1,0} = span(a + i b).
        let w = IncreasingFiltration::pure(2, 1);
        let mut f = BTreeMap::new();
        f.insert(1, Subspace::span(2, vec![vec![GR::one(), GR::i()]]));
        let f = DecreasingFiltration::new(2, f).unwrap();
        let bg = deligne_bigrading(&f, &w).unwrap();
        assert_eq!(bg.get(1, 0), f.get(1));
        assert_eq!(bg.get(0, 1), f.get(1).conj());
        assert!(bg.is_split());
        assert_eq!(bg.grading().y, ExactMatrix::scalar(2, GR::from_int(1)));
    }

    #[test]
    fn non_mhs_is_rejected() {
        let w = IncreasingFiltration::pure(2, 1);
        let mut f = BTreeMap::new();
        f.insert(1, Subspace::span(2, vec![unit_vector(2, 0)]));
        let f = DecreasingFiltration::new(2, f).unwrap();
        assert!(deligne_bigrading(&f, &w).is_err());
    }
}
