//! Distances between filtrations measured in a fixed hermitian metric.

use crate::linalg::{ExactMatrix, Rational, Subspace};
use crate::mhs::{DecreasingFiltration, HodgeMetric};

/// h-orthogonal projector onto a subspace.
pub fn orthogonal_projector(h: &HodgeMetric, s: &Subspace) -> ExactMatrix {
    let n = s.ambient_dim();
    if s.is_zero() {
        return ExactMatrix::zeros(n, n);
    }
    let x = ExactMatrix::from_columns(s.basis());
    let xh = &x.adjoint() * &h.hm;
    let gram = &xh * &x;
    let inv = gram.inverse().expect("Gram matrix of a basis is invertible");
    &(&x * &inv) * &xh
}

/// ‖(1 − P_A) P_B‖² = dim B − tr(P_A P_B) in the Hilbert–Schmidt norm of h,
/// for subspaces of equal dimension a symmetric measure of how far apart
/// they are.
pub fn subspace_distance_sq(h: &HodgeMetric, a: &Subspace, b: &Subspace) -> Rational {
    let pa = orthogonal_projector(h, a);
    let pb = orthogonal_projector(h, b);
    Rational::from_integer((b.dim() as i64).into()) - (&pa * &pb).trace().re
}

/// Largest squared distance between the steps F^p and G^p.
pub fn filtration_distance_sq(h: &HodgeMetric, f: &DecreasingFiltration, g: &DecreasingFiltration) -> Rational {
    let mut ps = f.indices();
    ps.extend(g.indices());
    ps.into_iter()
        .map(|p| {
            let (a, b) = (f.get(p), g.get(p));
            let d1 = subspace_distance_sq(h, &a, &b);
            let d2 = subspace_distance_sq(h, &b, &a);
            d1.max(d2)
        })
        .max()
        .unwrap_or_else(|| Rational::from_integer(0.into()))
}
