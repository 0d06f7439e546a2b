//! Deligne's grading Y(N, relY) of W and the sl₂-data it determines.

use super::triple::{sl2_complete, Sl2Triple};
use crate::error::{Error, Result};
use crate::linalg::{solve_linear, ExactMatrix, GR};
use crate::mhs::{joint_frame, Frame, Grading, IncreasingFiltration};

/// Gradings relY, Y and the triple (N₀, H = relY − Y, N₀⁺), with N = N₀ + N₋₂.
#[derive(Clone, Debug)]
pub struct Sl2Data {
    pub rel_y: Grading,
    pub y: Grading,
    pub triple: Sl2Triple,
    pub n0: ExactMatrix,
    pub n_minus2: ExactMatrix,
}

/// Components (N₀, N₋₁, N₋₂) of N under ad Y.
pub fn split_n(n: &ExactMatrix, y: &Grading) -> (ExactMatrix, ExactMatrix, ExactMatrix) {
    let f = y.frame();
    (f.ad_component(n, 0), f.ad_component(n, -1), f.ad_component(n, -2))
}

fn check_shape(w: &IncreasingFiltration) -> Result<()> {
    if let (Some(lo), Some(hi)) = (w.min_weight(), w.max_weight()) {
        if hi - lo > 2 {
            return Err(Error::unsupported(format!(
                "weight filtration spans weights {}..{}; only shapes of length at most three (types I and II) are supported",
                lo, hi
            )));
        }
    }
    Ok(())
}

/// Solves Σ x_u [op, B_u] = target over the basis B_u; target and images are
/// compared entrywise.
fn solve_in_span(basis: &[ExactMatrix], image: impl Fn(&ExactMatrix) -> ExactMatrix, target: &ExactMatrix) -> Option<ExactMatrix> {
    let n = target.rows();
    if basis.is_empty() {
        return target.is_zero().then(|| ExactMatrix::zeros(n, n));
    }
    let cols: Vec<_> = basis.iter().map(|b| image(b).to_vec()).collect();
    let sol = solve_linear(&ExactMatrix::from_columns(&cols), &target.to_vec()).0?;
    Some(basis.iter().zip(&sol).fold(ExactMatrix::zeros(n, n), |acc, (b, c)| &acc + &b.scale(c)))
}

fn conj_grading(y: &Grading, x: &ExactMatrix) -> Grading {
    let e = x.exp_nilpotent();
    let einv = (-x).exp_nilpotent();
    y.conjugate_by(&e, &einv)
}

/// Y(N, relY): the grading of W commuting with relY for which N has no
/// ad Y-weight −1 part and [N₋₂, N₀⁺] = 0.
///
/// Start from the canonical grading Y_b of W inside the relY eigenspaces and
/// move it by e^{X₋₁} then e^{X₋₂}, X₋ⱼ of Y_b-weight −j commuting with relY.
/// Stage one is [N₀, X₋₁] = −N₋₁; stage two is
/// [[N₀, X₋₂], N₀⁺] = −[N₋₂, N₀⁺]. Both are linear.
pub fn deligne_grading(n: &ExactMatrix, rel_y: &Grading, w: &IncreasingFiltration) -> Result<Grading> {
    check_shape(w)?;
    if rel_y.y.commutator(n) != n.scale(&GR::from_int(-2)) {
        return Err(Error::invalid("[relY, N] != -2N"));
    }
    if !w.is_preserved_by(&rel_y.y) {
        return Err(Error::invalid("relY does not preserve W"));
    }
    let pieces: Vec<_> = rel_y.eigenspaces.values().cloned().collect();
    let y_base = w.canonical_grading_in(&pieces)?;

    let frame = joint_frame(&y_base, rel_y)?;
    let (n0, n1, _) = split_n(n, &y_base);
    let basis1 = frame.basis_where(|a, b| a == -1 && b == 0);
    let x1 = solve_in_span(&basis1, |b| n0.commutator(b), &-&n1)
        .ok_or_else(|| Error::invalid("no grading kills the weight -1 part of N: the orbit is not admissible"))?;
    let y1 = conj_grading(&y_base, &x1);

    let frame1: Frame = joint_frame(&y1, rel_y)?;
    let (n0, _, n2) = split_n(n, &y1);
    let h = &rel_y.y - &y1.y;
    let n0p = sl2_complete(&n0, &h)?;
    let basis2 = frame1.basis_where(|a, b| a == -2 && b == 0);
    let target = -&n2.commutator(&n0p);
    let x2 = solve_in_span(&basis2, |b| n0.commutator(b).commutator(&n0p), &target)
        .ok_or_else(|| Error::invalid("no grading with [N_-2, N0+] = 0"))?;
    let y = conj_grading(&y1, &x2);
    verify_deligne_grading(n, rel_y, w, &y)?;
    Ok(y)
}

fn verify_deligne_grading(n: &ExactMatrix, rel_y: &Grading, w: &IncreasingFiltration, y: &Grading) -> Result<()> {
    if !y.grades(w) {
        return Err(Error::invariant("Y is not a grading of W"));
    }
    if !rel_y.y.commutator(&y.y).is_zero() {
        return Err(Error::invariant("[relY, Y] != 0"));
    }
    let (n0, n1, n2) = split_n(n, y);
    if !n1.is_zero() {
        return Err(Error::invariant("N_-1 != 0 for the Deligne grading"));
    }
    if &(&n0 + &n2) != n {
        return Err(Error::invariant("N has ad Y components below -2"));
    }
    let h = &rel_y.y - &y.y;
    let n0p = sl2_complete(&n0, &h)?;
    if !n0.commutator(&n2).is_zero() {
        return Err(Error::invariant("[N0, N_-2] != 0"));
    }
    if !n2.commutator(&n0p).is_zero() {
        return Err(Error::invariant("[N - N0, N0+] != 0"));
    }
    Ok(())
}

/// The full sl₂-data of (N, relY, W).
pub fn sl2_data(n: &ExactMatrix, rel_y: &Grading, w: &IncreasingFiltration) -> Result<Sl2Data> {
    let y = deligne_grading(n, rel_y, w)?;
    let (n0, _, n2) = split_n(n, &y);
    let h = &rel_y.y - &y.y;
    let n0p = sl2_complete(&n0, &h)?;
    let triple = Sl2Triple::new(n0.clone(), h, n0p)?;
    Ok(Sl2Data { rel_y: rel_y.clone(), y, triple, n0, n_minus2: n2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector;
    use std::collections::BTreeMap;

    #[test]
    fn commuting_n_splits_trivially() {
        let y = Grading::from_matrix(&ExactMatrix::from_ints(2, 2, &[1, 0, 0, 1]), [1]).unwrap();
        let n = ExactMatrix::e(2, 1, 0);
        let (a, b, c) = split_n(&n, &y);
        assert_eq!(a, n);
        assert!(b.is_zero() && c.is_zero());
    }

    #[test]
    fn type_i_sl2() {
        let mut g = BTreeMap::new();
        g.insert(0, vec![unit_vector(3, 2)]);
        g.insert(1, vec![unit_vector(3, 0), unit_vector(3, 1)]);
        let w = IncreasingFiltration::from_graded(3, &g).unwrap();
        let rel = Grading::from_matrix(&ExactMatrix::from_ints(3, 3, &[2, 0, 0, 0, 0, 0, 0, 0, 0]), [0, 2]).unwrap();
        let n = ExactMatrix::e(3, 1, 0);
        let d = sl2_data(&n, &rel, &w).unwrap();
        assert_eq!(d.y.y, ExactMatrix::from_ints(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 0]));
        assert_eq!(d.triple.h, ExactMatrix::from_ints(3, 3, &[1, 0, 0, 0, -1, 0, 0, 0, 0]));
        assert_eq!(d.triple.n0_plus, ExactMatrix::e(3, 0, 1));
        assert!(d.n_minus2.is_zero());
    }

    #[test]
    fn long_filtrations_unsupported() {
        let w = IncreasingFiltration::from_graded(2, &{
            let mut g = BTreeMap::new();
            g.insert(0, vec![unit_vector(2, 0)]);
            g.insert(3, vec![unit_vector(2, 1)]);
            g
        })
        .unwrap();
        let rel = Grading::from_matrix(&ExactMatrix::zeros(2, 2), [0]).unwrap();
        let e = deligne_grading(&ExactMatrix::zeros(2, 2), &rel, &w).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
