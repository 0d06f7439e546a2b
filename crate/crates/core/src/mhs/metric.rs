//! The mixed Hodge metric h_F on V and on gl(V).

use num_traits::Zero;

use super::bigrading::{deligne_bigrading, Bigrading};
use super::data::{is_positive_definite, MixedHodgeData};
use super::filtration::DecreasingFiltration;
use crate::error::{Error, Result};
use crate::linalg::{vec_conj, ExactMatrix, Rational, GR};

/// h(u, v) = v† · hm · u, linear in u and antilinear in v.
#[derive(Clone, Debug)]
pub struct HodgeMetric {
    pub hm: ExactMatrix,
    pub hm_inv: ExactMatrix,
    pub bigrading: Bigrading,
}

/// The metric making the I^{p,q} of (F, W) orthogonal, with
/// h(u, v) = i^{p−q} Q_{p+q}([u], [v̄]) on I^{p,q}.
pub fn mixed_hodge_metric(data: &MixedHodgeData, f: &DecreasingFiltration) -> Result<HodgeMetric> {
    let bg = deligne_bigrading(f, &data.w)?;
    let frame = bg.frame();
    let n = data.dim;
    let cols = frame.b.columns();
    let mut hb = ExactMatrix::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            if frame.labels[k] != frame.labels[l] {
                continue;
            }
            let (p, q) = frame.labels[k];
            hb[(l, k)] = &GR::i_pow((p - q) as i64) * &data.q_form(p + q, &cols[k], &vec_conj(&cols[l]));
        }
    }
    if !is_positive_definite(&hb) {
        return Err(Error::invalid("mixed Hodge metric is not positive definite: the polarization data is not valid at this F"));
    }
    let binv = &frame.b_inv;
    let hm = &(&binv.adjoint() * &hb) * binv;
    let hm_inv = hm.inverse().ok_or_else(|| Error::invariant("mixed Hodge metric is degenerate"))?;
    Ok(HodgeMetric { hm, hm_inv, bigrading: bg })
}

impl HodgeMetric {
    pub fn inner(&self, u: &[GR], v: &[GR]) -> GR {
        let hu = self.hm.apply(u);
        v.iter().zip(&hu).fold(GR::zero(), |s, (a, b)| s + a.conj() * b)
    }

    pub fn norm_sq(&self, u: &[GR]) -> Rational {
        self.inner(u, u).re
    }

    /// Adjoint with respect to h: h(Xu, v) = h(u, X*v).
    pub fn adjoint(&self, x: &ExactMatrix) -> ExactMatrix {
        &(&self.hm_inv * &x.adjoint()) * &self.hm
    }

    /// h(α, β) = Tr(α β*).
    pub fn gl_inner(&self, a: &ExactMatrix, b: &ExactMatrix) -> GR {
        (a * &self.adjoint(b)).trace()
    }

    pub fn gl_norm_sq(&self, x: &ExactMatrix) -> Rational {
        self.gl_inner(x, x).re
    }
}
