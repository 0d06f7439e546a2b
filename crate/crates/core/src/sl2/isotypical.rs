//! Isotypical decompositions of finite-dimensional sl₂-modules.

use std::collections::BTreeMap;

use super::triple::{ad_operator, Sl2Triple};
use crate::error::{Error, Result};
use crate::linalg::{kernel, rat, ExactMatrix, Subspace, Vector, GR};

/// An sl₂-module given by the images of n₀ (lowering), h and n₀⁺ (raising).
#[derive(Clone, Debug)]
pub struct Sl2Rep {
    pub lower: ExactMatrix,
    pub h: ExactMatrix,
    pub raise: ExactMatrix,
}

impl Sl2Rep {
    pub fn new(lower: ExactMatrix, h: ExactMatrix, raise: ExactMatrix) -> Result<Self> {
        let two = rat(2, 1);
        if h.commutator(&lower) != -lower.scale_q(&two)
            || h.commutator(&raise) != raise.scale_q(&two)
            || raise.commutator(&lower) != h
        {
            return Err(Error::invalid("operators do not satisfy the sl2 relations"));
        }
        Ok(Self { lower, h, raise })
    }

    /// The adjoint action of a triple on gl(V), flattened row-major.
    pub fn adjoint(t: &Sl2Triple) -> Self {
        Self { lower: ad_operator(&t.n0), h: ad_operator(&t.h), raise: ad_operator(&t.n0_plus) }
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// Ω = H² + 2N₀⁺N₀ + 2N₀N₀⁺, which equals 2x⁺x⁻ + 2x⁻x⁺ + z².
    pub fn casimir(&self) -> ExactMatrix {
        let two = rat(2, 1);
        let a = &self.h * &self.h;
        let b = (&self.raise * &self.lower).scale_q(&two);
        let c = (&self.lower * &self.raise).scale_q(&two);
        &(&a + &b) + &c
    }

    /// Highest weight vectors of weight r: ker N₀⁺ ∩ E_r(H).
    pub fn highest_weight_vectors(&self, r: u32) -> Vec<Vector> {
        let m = self.dim();
        let shifted = &self.h - &ExactMatrix::scalar(m, GR::from_int(r as i64));
        let mut rows = self.raise.row_vecs();
        rows.extend(shifted.row_vecs());
        if rows.is_empty() {
            return Vec::new();
        }
        kernel(&ExactMatrix::from_rows(rows))
    }
}

/// v, N₀v, …, N₀ʳv for a highest weight vector v of weight r.
#[derive(Clone, Debug)]
pub struct IrreducibleString {
    pub highest_weight: u32,
    pub vectors: Vec<Vector>,
}

#[derive(Clone, Debug)]
pub struct IsotypicalDecomposition {
    pub ambient: usize,
    pub components: BTreeMap<u32, Subspace>,
    pub strings: Vec<IrreducibleString>,
    coords: ExactMatrix,
}

impl IsotypicalDecomposition {
    pub fn component(&self, r: u32) -> Subspace {
        self.components.get(&r).cloned().unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    pub fn weights(&self) -> Vec<u32> {
        self.components.keys().copied().collect()
    }

    /// Projection of v onto g(r) along the other components.
    pub fn project(&self, r: u32, v: &[GR]) -> Vector {
        let c = self.coords.apply(v);
        let mut out = vec![GR::from_int(0); self.ambient];
        let mut k = 0;
        for s in &self.strings {
            for w in &s.vectors {
                if s.highest_weight == r {
                    for (o, x) in out.iter_mut().zip(w) {
                        *o = &*o + &(&c[k] * x);
                    }
                }
                k += 1;
            }
        }
        out
    }
}

pub fn isotypical(rep: &Sl2Rep) -> Result<IsotypicalDecomposition> {
    let m = rep.dim();
    let omega = rep.casimir();
    let mut strings = Vec::new();
    let mut components = BTreeMap::new();
    for r in 0..m as u32 {
        let hw = rep.highest_weight_vectors(r);
        if hw.is_empty() {
            continue;
        }
        let mut all = Vec::new();
        for v in hw {
            let mut chain = vec![v];
            for _ in 0..r {
                let next = rep.lower.apply(chain.last().unwrap());
                chain.push(next);
            }
            if !crate::linalg::vec_is_zero(&rep.lower.apply(chain.last().unwrap())) {
                return Err(Error::invalid(format!("string of highest weight {} does not terminate", r)));
            }
            let ev = GR::from_int((r * (r + 2)) as i64);
            for w in &chain {
                if omega.apply(w) != crate::linalg::vec_scale(w, &ev) {
                    return Err(Error::invariant(format!("Casimir does not act on g({}) as {}", r, r * (r + 2))));
                }
            }
            all.extend(chain.iter().cloned());
            strings.push(IrreducibleString { highest_weight: r, vectors: chain });
        }
        components.insert(r, Subspace::span(m, all));
    }
    let basis: Vec<Vector> = strings.iter().flat_map(|s| s.vectors.iter().cloned()).collect();
    if basis.len() != m {
        return Err(Error::invalid("Casimir is not semisimple over the expected eigenvalues: not an sl2-module"));
    }
    let coords = if m == 0 {
        ExactMatrix::zeros(0, 0)
    } else {
        ExactMatrix::from_columns(&basis)
            .inverse()
            .ok_or_else(|| Error::invalid("irreducible strings are dependent: not an sl2-module"))?
    };
    Ok(IsotypicalDecomposition { ambient: m, components, strings, coords })
}

/// The adjoint decomposition gl(V) = ⊕ g(r).
pub fn isotypical_gl(t: &Sl2Triple) -> Result<IsotypicalDecomposition> {
    isotypical(&Sl2Rep::adjoint(t))
}
