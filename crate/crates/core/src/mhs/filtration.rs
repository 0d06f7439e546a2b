//! Increasing and decreasing filtrations, stored sparsely.

use std::collections::BTreeMap;

use super::bigrading::Grading;
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Subspace, Vector};

/// W_k = the step at the largest key ≤ k, or {0} below every key. Keys are
/// exactly the weights where the subspace grows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncreasingFiltration {
    dim: usize,
    steps: BTreeMap<i32, Subspace>,
}

impl IncreasingFiltration {
    /// Builds from any map k → W_k. Steps must be nested and the largest must
    /// be the whole space.
    pub fn new(dim: usize, steps: BTreeMap<i32, Subspace>) -> Result<Self> {
        let mut out = BTreeMap::new();
        let mut prev = Subspace::zero(dim);
        for (k, s) in steps {
            if s.ambient_dim() != dim {
                return Err(Error::invalid(format!("W_{} has wrong ambient dimension", k)));
            }
            if !prev.is_subspace_of(&s) {
                return Err(Error::invalid(format!("W_{} does not contain the previous step", k)));
            }
            if s != prev {
                out.insert(k, s.clone());
            }
            prev = s;
        }
        if !prev.is_full() {
            return Err(Error::invalid("top step of increasing filtration is not the whole space"));
        }
        Ok(Self { dim, steps: out })
    }

    /// Filtration with W_k = span of all graded pieces of weight ≤ k.
    pub fn from_graded(dim: usize, graded: &BTreeMap<i32, Vec<Vector>>) -> Result<Self> {
        let mut acc: Vec<Vector> = Vec::new();
        let mut steps = BTreeMap::new();
        for (k, vs) in graded {
            acc.extend(vs.iter().cloned());
            steps.insert(*k, Subspace::span(dim, acc.clone()));
        }
        let f = Self::new(dim, steps)?;
        let total: usize = graded.values().map(|v| v.len()).sum();
        if total != dim {
            return Err(Error::invalid(format!(
                "graded weight basis has {} vectors for a space of dimension {}",
                total, dim
            )));
        }
        Ok(f)
    }

    /// The filtration with a single weight.
    pub fn pure(dim: usize, k: i32) -> Self {
        let mut steps = BTreeMap::new();
        if dim > 0 {
            steps.insert(k, Subspace::full(dim));
        }
        Self { dim, steps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: i32) -> Subspace {
        self.steps
            .range(..=k)
            .next_back()
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(self.dim))
    }

    /// Weights k with Gr_k ≠ 0, ascending.
    pub fn weights(&self) -> Vec<i32> {
        self.steps.keys().copied().collect()
    }

    pub fn min_weight(&self) -> Option<i32> {
        self.steps.keys().next().copied()
    }

    pub fn max_weight(&self) -> Option<i32> {
        self.steps.keys().next_back().copied()
    }

    pub fn gr_dim(&self, k: i32) -> usize {
        self.get(k).dim() - self.get(k - 1).dim()
    }

    pub fn steps(&self) -> &BTreeMap<i32, Subspace> {
        &self.steps
    }

    pub fn shift(&self, by: i32) -> Self {
        Self { dim: self.dim, steps: self.steps.iter().map(|(k, s)| (k + by, s.clone())).collect() }
    }

    pub fn is_preserved_by(&self, m: &ExactMatrix) -> bool {
        self.steps.values().all(|s| s.image(m).is_subspace_of(s))
    }

    /// True when m(W_k) ⊆ W_{k+shift} for all k.
    pub fn is_shifted_by(&self, m: &ExactMatrix, shift: i32) -> bool {
        self.steps.iter().all(|(k, s)| s.image(m).is_subspace_of(&self.get(k + shift)))
    }

    pub fn is_rational(&self) -> bool {
        self.steps.values().all(|s| s.is_conj_invariant())
    }

    pub fn transform(&self, g: &ExactMatrix) -> Self {
        Self { dim: self.dim, steps: self.steps.iter().map(|(k, s)| (*k, s.image(g))).collect() }
    }

    /// The grading whose E_k is the canonical complement of W_{k−1} in W_k.
    pub fn canonical_grading(&self) -> Grading {
        self.canonical_grading_in(&[Subspace::full(self.dim)])
            .expect("canonical complements always grade W")
    }

    /// Canonical complements of W_{k−1}∩S in W_k∩S, taken inside each piece
    /// S of a decomposition V = ⊕ S whose pieces are compatible with W.
    pub fn canonical_grading_in(&self, pieces: &[Subspace]) -> Result<Grading> {
        let mut eig: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
        for piece in pieces {
            let mut prev = Subspace::zero(self.dim);
            for (k, s) in &self.steps {
                let cur = s.intersect(piece)?;
                let c = prev.complement_in(&cur)?;
                eig.entry(*k).or_default().extend(c.basis().iter().cloned());
                prev = cur;
            }
        }
        let all: Vec<Vector> = eig.values().flatten().cloned().collect();
        if all.len() != self.dim || Subspace::span(self.dim, all).dim() != self.dim {
            return Err(Error::invalid("pieces are not compatible with the filtration"));
        }
        Ok(Grading::from_eigenvectors(self.dim, eig))
    }

    pub fn intersect_with(&self, sub: &Subspace) -> Result<BTreeMap<i32, Subspace>> {
        self.steps.iter().map(|(k, s)| Ok((*k, s.intersect(sub)?))).collect()
    }
}

/// F^p = the step at the smallest key ≥ p, or {0} above every key. The step
/// at the smallest key is the whole space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecreasingFiltration {
    dim: usize,
    steps: BTreeMap<i32, Subspace>,
}

impl DecreasingFiltration {
    /// Builds from any map p → F^p; if the lowest listed step is not the whole
    /// space, F^{p_min − 1} = V is implied.
    pub fn new(dim: usize, steps: BTreeMap<i32, Subspace>) -> Result<Self> {
        let mut prev: Option<(&i32, &Subspace)> = None;
        for (p, s) in &steps {
            if s.ambient_dim() != dim {
                return Err(Error::invalid(format!("F^{} has wrong ambient dimension", p)));
            }
            if let Some((q, lower)) = prev {
                if !s.is_subspace_of(lower) {
                    return Err(Error::invalid(format!("F^{} is not contained in F^{}", p, q)));
                }
            }
            prev = Some((p, s));
        }
        let raw = |p: i32| steps.range(p..).next().map(|(_, s)| s.clone()).unwrap_or_else(|| Subspace::zero(dim));
        let mut clean = BTreeMap::new();
        if let (Some(&lo), Some(&hi)) = (steps.keys().next(), steps.keys().next_back()) {
            for p in lo..=hi {
                let s = raw(p);
                if s != raw(p + 1) {
                    clean.insert(p, s);
                }
            }
        }
        if dim > 0 {
            match clean.iter().next() {
                None => {
                    clean.insert(0, Subspace::full(dim));
                }
                Some((p, s)) if !s.is_full() => {
                    let p = *p;
                    clean.insert(p - 1, Subspace::full(dim));
                }
                _ => {}
            }
        }
        Ok(Self { dim, steps: clean })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, p: i32) -> Subspace {
        self.steps
            .range(p..)
            .next()
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(self.dim))
    }

    /// Indices p with F^p ≠ F^{p+1}, ascending.
    pub fn indices(&self) -> Vec<i32> {
        self.steps.keys().copied().collect()
    }

    pub fn min_index(&self) -> Option<i32> {
        self.steps.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i32> {
        self.steps.keys().next_back().copied()
    }

    pub fn steps(&self) -> &BTreeMap<i32, Subspace> {
        &self.steps
    }

    pub fn transform(&self, g: &ExactMatrix) -> Self {
        Self { dim: self.dim, steps: self.steps.iter().map(|(p, s)| (*p, s.image(g))).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, steps: self.steps.iter().map(|(p, s)| (*p, s.conj())).collect() }
    }

    pub fn is_preserved_by(&self, m: &ExactMatrix) -> bool {
        self.steps.values().all(|s| s.image(m).is_subspace_of(s))
    }

    /// m(F^p) ⊆ F^{p+shift} for all p.
    pub fn is_shifted_by(&self, m: &ExactMatrix, shift: i32) -> bool {
        self.steps.iter().all(|(p, s)| s.image(m).is_subspace_of(&self.get(p + shift)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector;

    #[test]
    fn sparse_increasing() {
        let mut steps = BTreeMap::new();
        steps.insert(-2, Subspace::span(3, vec![unit_vector(3, 2)]));
        steps.insert(-1, Subspace::span(3, vec![unit_vector(3, 2)]));
        steps.insert(0, Subspace::full(3));
        let w = IncreasingFiltration::new(3, steps).unwrap();
        assert_eq!(w.weights(), vec![-2, 0]);
        assert_eq!(w.get(-1).dim(), 1);
        assert_eq!(w.get(-3).dim(), 0);
        assert_eq!(w.get(7).dim(), 3);
        assert_eq!(w.gr_dim(-1), 0);
    }

    #[test]
    fn decreasing_implied_bottom() {
        let mut steps = BTreeMap::new();
        steps.insert(1, Subspace::span(2, vec![unit_vector(2, 0)]));
        let f = DecreasingFiltration::new(2, steps).unwrap();
        assert!(f.get(0).is_full());
        assert_eq!(f.get(1).dim(), 1);
        assert!(f.get(2).is_zero());
        assert_eq!(f.indices(), vec![0, 1]);
    }

    #[test]
    fn decreasing_redundant_steps_collapse() {
        let a = Subspace::span(2, vec![unit_vector(2, 0)]);
        let mut s1 = BTreeMap::new();
        s1.insert(-1, Subspace::full(2));
        s1.insert(0, a.clone());
        s1.insert(1, a.clone());
        let mut s2 = BTreeMap::new();
        s2.insert(-3, Subspace::full(2));
        s2.insert(-1, Subspace::full(2));
        s2.insert(1, a);
        assert_eq!(DecreasingFiltration::new(2, s1).unwrap(), DecreasingFiltration::new(2, s2).unwrap());
    }
}
