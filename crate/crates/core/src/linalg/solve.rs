//! Row reduction, linear solves and spectral projectors.

use num_traits::{One, Zero};

use super::gaussian::{rat_int, GR};
use super::matrix::{ExactMatrix, Vector};
use crate::error::{Error, Result};

/// Reduced row echelon form of a list of row vectors. Returns the nonzero rows
/// (pivot entry 1, pivot columns cleared) and the pivot columns, ascending.
pub fn rref(mut rows: Vec<Vector>) -> (Vec<Vector>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in c..ncols {
                if !pivot_row[k].is_zero() {
                    row[k] -= &(&f * &pivot_row[k]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Kernel basis of the map whose reduced rows are `rref_rows` with `pivots`,
/// over `ncols` unknowns.
fn kernel_from_rref(rref_rows: &[Vector], pivots: &[usize], ncols: usize) -> Vec<Vector> {
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![GR::zero(); ncols];
        v[free] = GR::one();
        for (row, &p) in rref_rows.iter().zip(pivots) {
            v[p] = -&row[free];
        }
        kernel.push(v);
    }
    kernel
}

/// Solves `A x = b`. Returns a particular solution when one exists (free
/// variables set to zero) and a basis of ker A in either case.
pub fn solve_linear(a: &ExactMatrix, b: &[GR]) -> (Option<Vector>, Vec<Vector>) {
    assert_eq!(a.rows(), b.len(), "right-hand side has wrong length");
    let n = a.cols();
    let augmented: Vec<Vector> = (0..a.rows())
        .map(|i| {
            let mut row = a.row(i);
            row.push(b[i].clone());
            row
        })
        .collect();
    let (rows, pivots) = rref(augmented);
    if pivots.last() == Some(&n) {
        let (rows_a, pivots_a) = rref(a.row_vecs());
        return (None, kernel_from_rref(&rows_a, &pivots_a, n));
    }
    let mut x = vec![GR::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    let kernel = kernel_from_rref(&rows, &pivots, n);
    (Some(x), kernel)
}

/// Basis of the kernel of `a`.
pub fn kernel(a: &ExactMatrix) -> Vec<Vector> {
    let (rows, pivots) = rref(a.row_vecs());
    kernel_from_rref(&rows, &pivots, a.cols())
}

/// Checks that ∏(S − λᵢ) = 0 over the supplied eigenvalue list.
pub fn check_semisimple(s: &ExactMatrix, eigenvalues: &[i64]) -> Result<()> {
    let n = s.rows();
    let mut prod = ExactMatrix::identity(n);
    for &l in eigenvalues {
        prod = &prod * &(s - &ExactMatrix::scalar(n, GR::from_int(l)));
    }
    if prod.is_zero() {
        Ok(())
    } else {
        Err(Error::invariant(format!(
            "operator is not semisimple over the eigenvalue list {:?}",
            eigenvalues
        )))
    }
}

/// Projector onto the λ-eigenspace of a semisimple `S` whose spectrum lies in
/// `eigenvalues`, via the Lagrange product ∏_{μ≠λ}(S−μ)/(λ−μ).
pub fn eigen_projection(s: &ExactMatrix, eigenvalues: &[i64], lambda: i64) -> Result<ExactMatrix> {
    check_semisimple(s, eigenvalues)?;
    let n = s.rows();
    if !eigenvalues.contains(&lambda) {
        return Ok(ExactMatrix::zeros(n, n));
    }
    let mut p = ExactMatrix::identity(n);
    let mut seen = Vec::new();
    for &mu in eigenvalues {
        if mu == lambda || seen.contains(&mu) {
            continue;
        }
        seen.push(mu);
        let factor = (s - &ExactMatrix::scalar(n, GR::from_int(mu))).scale_q(&(rat_int(1) / rat_int(lambda - mu)));
        p = &p * &factor;
    }
    Ok(p)
}

/// The same projector applied to a single vector through a linear operator
/// given as a closure. No semisimplicity check is made.
pub fn apply_eigen_projection<F>(op: F, v: &[GR], eigenvalues: &[i64], lambda: i64) -> Vector
where
    F: Fn(&[GR]) -> Vector,
{
    if !eigenvalues.contains(&lambda) {
        return vec![GR::zero(); v.len()];
    }
    let mut w = v.to_vec();
    let mut seen = Vec::new();
    for &mu in eigenvalues {
        if mu == lambda || seen.contains(&mu) {
            continue;
        }
        seen.push(mu);
        let sw = op(&w);
        let c = rat_int(1) / rat_int(lambda - mu);
        let muq = GR::from_int(mu);
        w = sw.iter().zip(&w).map(|(a, b)| (a - &(&muq * b)).scale(&c)).collect();
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gaussian::rat;

    #[test]
    fn identity_system() {
        let a = ExactMatrix::identity(3);
        let b = vec![GR::from_int(1), GR::i(), GR::from_frac(2, 3)];
        let (x, k) = solve_linear(&a, &b);
        assert_eq!(x.unwrap(), b);
        assert!(k.is_empty());
    }

    #[test]
    fn zero_system_inconsistent() {
        let a = ExactMatrix::zeros(2, 2);
        let (x, k) = solve_linear(&a, &[GR::one(), GR::zero()]);
        assert!(x.is_none());
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn gaussian_system_substitution() {
        let a = ExactMatrix::from_rows(vec![
            vec![GR::new(rat(1, 2), rat(1, 1)), GR::from_int(3)],
            vec![GR::i(), GR::new(rat(-2, 3), rat(1, 5))],
        ]);
        let b = vec![GR::from_int(1), GR::new(rat(0, 1), rat(-1, 1))];
        let (x, k) = solve_linear(&a, &b);
        assert!(k.is_empty());
        assert_eq!(a.apply(&x.unwrap()), b);
    }

    #[test]
    fn projections() {
        let s = ExactMatrix::diag(&[GR::from_int(1), GR::from_int(-1)]);
        let p = eigen_projection(&s, &[1, -1], 1).unwrap();
        assert_eq!(p, ExactMatrix::diag(&[GR::one(), GR::zero()]));
        assert!(eigen_projection(&s, &[1, -1], 3).unwrap().is_zero());
        assert!(eigen_projection(&s, &[1], 1).is_err());
    }
}
