//! Holomorphic curvature of the mixed Hodge metric on the tangent space
//! t_F = ⊕_{r<0} gl^{r,s}.

use num_traits::Zero;
use serde::Serialize;

use super::bigrading::{gl_bigrading, GlBigrading};
use super::data::MixedHodgeData;
use super::filtration::DecreasingFiltration;
use super::metric::{mixed_hodge_metric, HodgeMetric};
use crate::error::{Error, Result};
use crate::linalg::{rat, rat_to_f64, ExactMatrix, Rational, Vector, GR};

/// Everything needed to write operators on t_F as matrices.
pub struct TangentSpace {
    pub metric: HodgeMetric,
    pub gl: GlBigrading,
    pub basis: Vec<ExactMatrix>,
    gram: ExactMatrix,
    gram_inv: ExactMatrix,
}

impl TangentSpace {
    pub fn at(data: &MixedHodgeData, f: &DecreasingFiltration) -> Result<Self> {
        let metric = mixed_hodge_metric(data, f)?;
        let gl = gl_bigrading(&metric.bigrading);
        let basis = gl.frame.basis_where(|r, _| r < 0);
        let m = basis.len();
        let mut gram = ExactMatrix::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                gram[(a, b)] = metric.gl_inner(&basis[b], &basis[a]);
            }
        }
        let gram_inv = if m == 0 {
            gram.clone()
        } else {
            gram.inverse().ok_or_else(|| Error::invariant("tangent Gram matrix is singular"))?
        };
        Ok(Self { metric, gl, basis, gram, gram_inv })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// π_q: the gl^{r,s} are mutually h-orthogonal, so the orthogonal
    /// projection onto t_F keeps the r < 0 components.
    pub fn pi_q(&self, x: &ExactMatrix) -> ExactMatrix {
        self.gl.frame.project(x, |r, _| r < 0)
    }

    pub fn contains(&self, x: &ExactMatrix) -> bool {
        self.gl.frame.lies_in(x, |r, _| r < 0)
    }

    pub fn coords(&self, x: &ExactMatrix) -> Vector {
        let m = self.gl.frame.to_frame(x);
        let n = self.gl.frame.dim();
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..n {
            for j in 0..n {
                if self.gl.frame.entry_type(i, j).0 < 0 {
                    out.push(m[(i, j)].clone());
                }
            }
        }
        out
    }

    pub fn from_coords(&self, c: &[GR]) -> ExactMatrix {
        let n = self.gl.frame.dim();
        self.basis.iter().zip(c).fold(ExactMatrix::zeros(n, n), |acc, (b, x)| &acc + &b.scale(x))
    }

    /// Matrix of π_q ∘ op restricted to t_F.
    pub fn operator(&self, op: impl Fn(&ExactMatrix) -> ExactMatrix) -> ExactMatrix {
        let cols: Vec<Vector> = self.basis.iter().map(|b| self.coords(&self.pi_q(&op(b)))).collect();
        if cols.is_empty() {
            return ExactMatrix::zeros(0, 0);
        }
        ExactMatrix::from_columns(&cols)
    }

    pub fn op_adjoint(&self, a: &ExactMatrix) -> ExactMatrix {
        &(&self.gram_inv * &a.adjoint()) * &self.gram
    }

    pub fn inner(&self, a: &[GR], b: &[GR]) -> GR {
        let ga = self.gram.apply(a);
        b.iter().zip(&ga).fold(GR::zero(), |s, (x, y)| s + x.conj() * y)
    }

    /// S(u, v̄) as an operator on t_F.
    pub fn s_tensor(&self, u: &ExactMatrix, v: &ExactMatrix) -> ExactMatrix {
        let half = GR::real(rat(1, 2));
        let (ub, vb) = (u.conj(), v.conj());
        let c1 = vb.commutator(u);
        let c2 = ub.commutator(v);
        let part = |c: &ExactMatrix| &self.gl.n_plus(c) + &self.gl.n_zero(c).scale(&half);
        let x = &part(&c1) + &self.metric.adjoint(&part(&c2));
        let first = self.operator(|t| x.commutator(t));
        let pv = self.gl.n_plus(&vb);
        let pu = self.gl.n_plus(&ub);
        let a = self.operator(|t| pv.commutator(t));
        let b = self.operator(|t| pu.commutator(t));
        let bs = self.op_adjoint(&b);
        &first + &a.commutator(&bs)
    }
}

/// R(u, v) = S(u, v̄) − S(v, ū) on t_F.
pub fn curvature(data: &MixedHodgeData, f: &DecreasingFiltration, u: &ExactMatrix, v: &ExactMatrix) -> Result<ExactMatrix> {
    let t = TangentSpace::at(data, f)?;
    for (name, x) in [("u", u), ("v", v)] {
        if !t.contains(x) {
            return Err(Error::invalid(format!("{} does not lie in the tangent space t_F", name)));
        }
    }
    Ok(&t.s_tensor(u, v) - &t.s_tensor(v, u))
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionalCurvature {
    /// h(S(u,ū)u, u) / h(u,u)².
    #[serde(serialize_with = "crate::linalg::ser_rational")]
    pub value: Rational,
    pub value_f64: f64,
    /// −h([ū,u],[ū,u]) / h(u,u)².
    #[serde(serialize_with = "crate::linalg::ser_rational")]
    pub bracket_form: Rational,
    pub agrees: bool,
}

pub fn sectional_curvature(data: &MixedHodgeData, f: &DecreasingFiltration, u: &ExactMatrix) -> Result<SectionalCurvature> {
    let t = TangentSpace::at(data, f)?;
    if !t.contains(u) {
        return Err(Error::invalid("u does not lie in the tangent space t_F"));
    }
    let hu = t.metric.gl_norm_sq(u);
    if hu.is_zero() {
        return Err(Error::invalid("sectional curvature along the zero vector"));
    }
    let s = t.s_tensor(u, u);
    let cu = t.coords(u);
    let num = t.inner(&s.apply(&cu), &cu);
    if !num.im.is_zero() {
        return Err(Error::invariant("h(S(u,ū)u,u) is not real"));
    }
    let denom = &hu * &hu;
    let value = &num.re / &denom;
    let br = u.conj().commutator(u);
    let bracket_form = -(&t.metric.gl_norm_sq(&br) / &denom);
    Ok(SectionalCurvature {
        value_f64: rat_to_f64(&value),
        agrees: value == bracket_form,
        value,
        bracket_form,
    })
}
