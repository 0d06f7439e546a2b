//! Relative weight filtrations relW(N, W).
//!
//! Construction: fix the canonical grading G of W and let N₀ be the G-weight 0
//! part of N. The direct sum M⁰ of the centered monodromy filtrations of N₀ on
//! the graded pieces already has the right graded behaviour; what can fail is
//! N M⁰_ℓ ⊆ M⁰_{ℓ−2}. We look for a unipotent gauge e^X, X of negative
//! G-weight, with e^{−X} N e^{X} lowering M⁰ by two. Each G-degree is one
//! linear solve; then relW = e^X.M⁰, which is checked against both axioms.

use std::collections::BTreeMap;

use super::monodromy::{is_monodromy_filtration, monodromy_weight_filtration};
use crate::error::Result;
use crate::linalg::{eigen_projection, solve_linear, ExactMatrix, Subspace, Vector};
use crate::mhs::{Frame, IncreasingFiltration};

/// The map induced by N on Gr^W_k, in the canonical basis of the canonical
/// complement E_k of W_{k−1} in W_k.
pub fn graded_action(n: &ExactMatrix, w: &IncreasingFiltration, k: i32) -> Option<ExactMatrix> {
    let g = w.canonical_grading();
    let n0 = g.frame().ad_component(n, 0);
    g.eigenspace(k).restrict(&n0)
}

pub fn relative_weight_filtration(n: &ExactMatrix, w: &IncreasingFiltration) -> Result<Option<IncreasingFiltration>> {
    let dim = w.dim();
    if !w.is_preserved_by(n) || !n.is_nilpotent() {
        return Ok(None);
    }
    let g = w.canonical_grading();
    let n0 = g.frame().ad_component(n, 0);
    let mut cols: Vec<Vector> = Vec::new();
    let mut labels = Vec::new();
    for k in w.weights() {
        let ek = g.eigenspace(k);
        let Some(nk) = ek.restrict(&n0) else { return Ok(None) };
        let mk = monodromy_weight_filtration(&nk, k)?;
        let b = ek.basis_matrix();
        for (l, s) in &mk.canonical_grading().eigenspaces {
            for v in s.basis() {
                cols.push(b.apply(v));
                labels.push((k, *l));
            }
        }
    }
    let frame = Frame::new(&cols, labels.clone());
    let depth = w.max_weight().unwrap_or(0) - w.min_weight().unwrap_or(0);
    let mut x = ExactMatrix::zeros(dim, dim);
    for d in 1..=depth {
        let nt = conj_by_exp(n, &x);
        let nt_d = frame.to_frame(&frame.project(&nt, |a, _| a == -d));
        let unknowns: Vec<(usize, usize)> = positions(&frame, |a, _| a == -d);
        let equations: Vec<(usize, usize)> = positions(&frame, |a, b| a == -d && b >= -1);
        if equations.is_empty() {
            continue;
        }
        let images: Vec<ExactMatrix> = unknowns
            .iter()
            .map(|&(i, j)| {
                let bu = frame.from_frame(&ExactMatrix::e(dim, i, j));
                frame.to_frame(&n0.commutator(&bu))
            })
            .collect();
        let mut a = ExactMatrix::zeros(equations.len(), unknowns.len());
        let mut rhs = Vec::with_capacity(equations.len());
        for (r, &(i, j)) in equations.iter().enumerate() {
            for (c, img) in images.iter().enumerate() {
                a[(r, c)] = img[(i, j)].clone();
            }
            rhs.push(-&nt_d[(i, j)]);
        }
        let Some(sol) = solve_linear(&a, &rhs).0 else { return Ok(None) };
        let mut xd = ExactMatrix::zeros(dim, dim);
        for (c, &(i, j)) in unknowns.iter().enumerate() {
            xd[(i, j)] = sol[c].clone();
        }
        x = &x + &frame.from_frame(&xd);
    }
    let mut steps = BTreeMap::new();
    let (lmin, lmax) = (labels.iter().map(|l| l.1).min().unwrap_or(0), labels.iter().map(|l| l.1).max().unwrap_or(0));
    let e = x.exp_nilpotent();
    for l in lmin..=lmax {
        let vs: Vec<Vector> = cols.iter().zip(&labels).filter(|(_, lab)| lab.1 <= l).map(|(v, _)| e.apply(v)).collect();
        steps.insert(l, Subspace::span(dim, vs));
    }
    let m = IncreasingFiltration::new(dim, steps)?;
    Ok(is_relative_weight_filtration(n, w, &m).then_some(m))
}

fn positions(frame: &Frame, pred: impl Fn(i32, i32) -> bool) -> Vec<(usize, usize)> {
    let n = frame.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = frame.entry_type(i, j);
            if pred(a, b) {
                out.push((i, j));
            }
        }
    }
    out
}

/// e^{−X} N e^{X}.
fn conj_by_exp(n: &ExactMatrix, x: &ExactMatrix) -> ExactMatrix {
    let e = x.exp_nilpotent();
    let einv = (-x).exp_nilpotent();
    &(&einv * n) * &e
}

/// N M_ℓ ⊆ M_{ℓ−2}, and on each Gr^W_k the induced filtration is the
/// monodromy filtration of Gr_k N centered at k.
pub fn is_relative_weight_filtration(n: &ExactMatrix, w: &IncreasingFiltration, m: &IncreasingFiltration) -> bool {
    if !m.is_shifted_by(n, -2) {
        return false;
    }
    let g = w.canonical_grading();
    let eigs: Vec<i64> = g.eigenvalues().iter().map(|&k| k as i64).collect();
    let n0 = g.frame().ad_component(n, 0);
    let (Some(lmin), Some(lmax)) = (m.min_weight(), m.max_weight()) else { return w.dim() == 0 };
    for k in w.weights() {
        let Ok(p) = eigen_projection(&g.y, &eigs, k as i64) else { return false };
        let ek = g.eigenspace(k);
        let Some(nk) = ek.restrict(&n0) else { return false };
        let wk = w.get(k);
        let mut steps = BTreeMap::new();
        for l in lmin - 1..=lmax {
            let Ok(s) = m.get(l).intersect(&wk) else { return false };
            let coords: Option<Vec<Vector>> = s.basis().iter().map(|v| ek.coordinates(&p.apply(v))).collect();
            let Some(coords) = coords else { return false };
            steps.insert(l, Subspace::span(ek.dim(), coords));
        }
        let Ok(induced) = IncreasingFiltration::new(ek.dim(), steps) else { return false };
        if !is_monodromy_filtration(&nk, &induced, k) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector;

    fn w_type_i() -> IncreasingFiltration {
        let mut g = BTreeMap::new();
        g.insert(0, vec![unit_vector(3, 2)]);
        g.insert(1, vec![unit_vector(3, 0), unit_vector(3, 1)]);
        IncreasingFiltration::from_graded(3, &g).unwrap()
    }

    #[test]
    fn pure_agrees_with_monodromy() {
        let n = ExactMatrix::e(2, 1, 0);
        let w = IncreasingFiltration::pure(2, 3);
        let r = relative_weight_filtration(&n, &w).unwrap().unwrap();
        assert_eq!(r, monodromy_weight_filtration(&n, 3).unwrap());
    }

    #[test]
    fn type_i_relative() {
        let n = ExactMatrix::e(3, 1, 0);
        let r = relative_weight_filtration(&n, &w_type_i()).unwrap().unwrap();
        assert_eq!(r.gr_dim(2), 1);
        assert_eq!(r.gr_dim(0), 2);
        assert_eq!(r.get(0), Subspace::span(3, vec![unit_vector(3, 1), unit_vector(3, 2)]));
    }

    #[test]
    fn existence_depends_on_the_extension() {
        let mut g = BTreeMap::new();
        g.insert(-2, vec![unit_vector(3, 2)]);
        g.insert(-1, vec![unit_vector(3, 1)]);
        g.insert(0, vec![unit_vector(3, 0)]);
        let w = IncreasingFiltration::from_graded(3, &g).unwrap();
        // Gr N = 0 forces relW = W, so N W_0 ⊆ W_{−2} is needed.
        let n = ExactMatrix::e(3, 1, 0);
        assert!(relative_weight_filtration(&n, &w).unwrap().is_none());
        let n = ExactMatrix::e(3, 2, 0);
        assert_eq!(relative_weight_filtration(&n, &w).unwrap().unwrap(), w);
    }

    #[test]
    fn type_i_with_unipotent_extension_is_not_admissible() {
        // N a = b, N b = c: the weight-zero piece b -> c cannot be gauged away.
        let n = &ExactMatrix::e(3, 1, 0) + &ExactMatrix::e(3, 2, 1);
        assert!(relative_weight_filtration(&n, &w_type_i()).unwrap().is_none());
    }
}
