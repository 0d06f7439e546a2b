//! The monodromy weight filtration of a nilpotent endomorphism.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Subspace};
use crate::mhs::IncreasingFiltration;

/// Nilpotency index: the least m with N^m = 0.
pub fn nilpotency_index(n: &ExactMatrix) -> Option<usize> {
    let mut p = ExactMatrix::identity(n.rows());
    for m in 0..=n.rows() {
        if p.is_zero() {
            return Some(m);
        }
        p = &p * n;
    }
    None
}

/// M(N) centered at `center`: M_{center+ℓ} = Σ_{j≥0} im N^j ∩ ker N^{ℓ+j+1}.
/// Both defining axioms are re-checked before returning.
pub fn monodromy_weight_filtration(n: &ExactMatrix, center: i32) -> Result<IncreasingFiltration> {
    let dim = n.rows();
    let m = nilpotency_index(n).ok_or_else(|| Error::invalid("N is not nilpotent"))?;
    let mut steps = BTreeMap::new();
    if dim == 0 {
        return IncreasingFiltration::new(0, steps);
    }
    let d = m as i32 - 1;
    let mut pows = vec![ExactMatrix::identity(dim)];
    for _ in 0..=m {
        let next = pows.last().unwrap() * n;
        pows.push(next);
    }
    let full = Subspace::full(dim);
    let kernel_of = |k: usize| Subspace::preimage(&pows[k.min(m)], &Subspace::zero(dim));
    for l in -d - 1..=d {
        let mut acc = Subspace::zero(dim);
        for j in 0..=m {
            let kk = l + j as i32 + 1;
            if kk <= 0 {
                continue;
            }
            let im = full.image(&pows[j]);
            let piece = im.intersect(&kernel_of(kk as usize))?;
            acc = acc.sum(&piece)?;
        }
        steps.insert(l + center, acc);
    }
    let filt = IncreasingFiltration::new(dim, steps)?;
    if !is_monodromy_filtration(n, &filt, center) {
        return Err(Error::invariant("monodromy weight filtration fails its defining axioms"));
    }
    Ok(filt)
}

/// N M_ℓ ⊆ M_{ℓ−2}, and N^ℓ : Gr_{c+ℓ} → Gr_{c−ℓ} an isomorphism for ℓ ≥ 1.
pub fn is_monodromy_filtration(n: &ExactMatrix, m: &IncreasingFiltration, center: i32) -> bool {
    if !m.is_shifted_by(n, -2) {
        return false;
    }
    let (Some(lo), Some(hi)) = (m.min_weight(), m.max_weight()) else {
        return n.rows() == 0;
    };
    let reach = (hi - center).max(center - lo).max(0);
    let mut p = n.clone();
    for l in 1..=reach {
        if m.gr_dim(center + l) != m.gr_dim(center - l) {
            return false;
        }
        // Injectivity on Gr_{c+l}: {v ∈ M_{c+l} : N^l v ∈ M_{c−l−1}} = M_{c+l−1}.
        let pre = Subspace::preimage(&p, &m.get(center - l - 1));
        match pre.intersect(&m.get(center + l)) {
            Ok(k) if k == m.get(center + l - 1) => {}
            _ => return false,
        }
        p = &p * n;
    }
    true
}
