//! Decomposition of the weight −1 part of gl(V) at a split point into
//! irreducible Hodge representations of sl₂.
//!
//! A summand is H(d)⊗S(n) (n = 2d − 1) or E(p,q)⊗S(n) (p > q,
//! p + q + n = −1). Its basis is ε⊗ν_k with ν_k = (e+if)^k(e−if)^{n−k} of
//! type (k, n−k), where ε⊗e^n is a highest weight vector and
//! e^{n−j}f^j = ((n−j)!/n!)(ad N₀)^j (ε⊗e^n).

use serde::Serialize;

use super::triple::{ad_operator, Sl2Triple};
use crate::error::{Error, Result};
use crate::linalg::{kernel, rat, ExactMatrix, Subspace, Vector, GR};
use crate::mhs::{ad_exp_apply, GlBigrading};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SummandKind {
    /// H(d)⊗S(n).
    Trivial { d: i32 },
    /// E(p,q)⊗S(n).
    Pair { p: i32, q: i32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibleHodgeSummand {
    pub kind: SummandKind,
    pub n: u32,
    /// ε^{p,q}⊗e^n.
    pub epsilon: ExactMatrix,
    /// ε^{q,p}⊗e^n = conj of `epsilon`, for pairs.
    pub epsilon_conj: Option<ExactMatrix>,
    /// ε⊗ν_k (and ε̄⊗ν_k for pairs) with their declared gl-types at F_o.
    pub basis: Vec<(ExactMatrix, (i32, i32))>,
    /// Coefficient τ_M of S_n on this summand, filled in once S_n is known.
    pub tau: GR,
}

impl IrreducibleHodgeSummand {
    /// (p, q) of ε.
    pub fn epsilon_type(&self) -> (i32, i32) {
        match self.kind {
            SummandKind::Trivial { d } => (-d, -d),
            SummandKind::Pair { p, q } => (p, q),
        }
    }
}

/// (1 + ix)^k (1 − ix)^{n−k} as coefficients of x^0..x^n.
pub fn nu_coefficients(n: u32, k: u32) -> Vec<GR> {
    let mut c = vec![GR::from_int(1)];
    let mul = |c: &Vec<GR>, a: GR| {
        let mut out = vec![GR::from_int(0); c.len() + 1];
        for (j, x) in c.iter().enumerate() {
            out[j] = &out[j] + x;
            out[j + 1] = &out[j + 1] + &(x * &a);
        }
        out
    };
    for _ in 0..k {
        c = mul(&c, GR::i());
    }
    for _ in k..n {
        c = mul(&c, -GR::i());
    }
    c
}

/// e^{n−j}f^j for j = 0..n, from a highest weight vector ε⊗e^n.
pub fn monomials(n0: &ExactMatrix, top: &ExactMatrix, n: u32) -> Vec<ExactMatrix> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut cur = top.clone();
    // (n−j)!/n! accumulated as 1/(n(n−1)…(n−j+1)).
    let mut scale = rat(1, 1);
    for j in 0..=n {
        out.push(cur.scale_q(&scale));
        if j < n {
            cur = n0.commutator(&cur);
            scale = scale / rat((n - j) as i64, 1);
        }
    }
    out
}

/// ε⊗ν_k.
pub fn nu(n0: &ExactMatrix, top: &ExactMatrix, n: u32, k: u32) -> ExactMatrix {
    let mons = monomials(n0, top, n);
    let dim = top.rows();
    nu_coefficients(n, k).iter().zip(&mons).fold(ExactMatrix::zeros(dim, dim), |acc, (c, m)| &acc + &m.scale(c))
}

fn stack_kernel(ops: &[ExactMatrix]) -> Vec<Vector> {
    let rows: Vec<Vector> = ops.iter().flat_map(|o| o.row_vecs()).collect();
    kernel(&ExactMatrix::from_rows(rows))
}

fn flat_span(dim: usize, ms: &[ExactMatrix]) -> Subspace {
    Subspace::span(dim * dim, ms.iter().map(|m| m.to_vec()).collect())
}

/// Splits ⊕_{r+s=−1} gl^{r,s} (types at the split point F_o carried by `gl`)
/// into irreducible Hodge summands for the adjoint action of `triple`.
pub fn decompose_weight_minus_one(triple: &Sl2Triple, gl: &GlBigrading) -> Result<Vec<IrreducibleHodgeSummand>> {
    let dim = triple.dim();
    let module = flat_span(dim, &gl.frame.basis_where(|r, s| r + s == -1));
    if module.is_zero() {
        return Ok(Vec::new());
    }
    let ad_h = ad_operator(&triple.h);
    let ad_plus = ad_operator(&triple.n0_plus);
    let not_hodge = |msg: String| Error::invalid(format!("module not Hodge: {}", msg));
    let i_n0 = triple.n0.scale(&GR::i());
    let minus_i_n0 = triple.n0.scale(&-GR::i());
    let mut out = Vec::new();
    for n in 0..(2 * dim as u32) {
        let shifted = &ad_h - &ExactMatrix::scalar(dim * dim, GR::from_int(n as i64));
        let hw = Subspace::span(dim * dim, stack_kernel(&[ad_plus.clone(), shifted])).intersect(&module)?;
        if hw.is_zero() {
            continue;
        }
        // e^{i ad N₀}(ε^{p,q}⊗e^n) = ε^{p,q}⊗ν_n lies in gl^{p+n,q}.
        let mut by_type: std::collections::BTreeMap<(i32, i32), Vec<ExactMatrix>> = Default::default();
        for v in hw.basis() {
            let m = ExactMatrix::from_vec(dim, dim, v.clone());
            let w = ad_exp_apply(&i_n0, &m);
            for (r, s) in gl.frame.support(&w) {
                let piece = ad_exp_apply(&minus_i_n0, &gl.component(&w, r, s));
                if !hw.contains(&piece.to_vec()) {
                    return Err(not_hodge(format!("weight {} highest weight space is not a sum of Hodge pieces", n)));
                }
                by_type.entry((r - n as i32, s)).or_default().push(piece);
            }
        }
        let by_type: Vec<((i32, i32), Subspace)> = by_type.into_iter().map(|(t, ms)| (t, flat_span(dim, &ms))).collect();
        let total: usize = by_type.iter().map(|(_, s)| s.dim()).sum();
        if total != hw.dim() {
            return Err(not_hodge(format!("Hodge pieces of the weight {} highest weight space overlap", n)));
        }
        for ((p, q), sub) in &by_type {
            if p + q + n as i32 != -1 {
                return Err(not_hodge(format!("ε of type ({},{}) with n = {} has weight ≠ −1", p, q, n)));
            }
            if p == q {
                let real = sub.real_basis().ok_or_else(|| not_hodge(format!("H({}) part is not real", -p)))?;
                for v in real {
                    let eps = ExactMatrix::from_vec(dim, dim, v);
                    out.push(summand(triple, gl, SummandKind::Trivial { d: -p }, n, eps, None)?);
                }
            } else if p > q {
                let partner = by_type.iter().find(|(t, _)| *t == (*q, *p)).map(|(_, s)| s);
                for v in sub.basis() {
                    let eps = ExactMatrix::from_vec(dim, dim, v.clone());
                    let bar = eps.conj();
                    if !partner.is_some_and(|s| s.contains(&bar.to_vec())) {
                        return Err(not_hodge(format!("conjugate of a ({},{}) vector is not of type ({},{})", p, q, q, p)));
                    }
                    out.push(summand(triple, gl, SummandKind::Pair { p: *p, q: *q }, n, eps, Some(bar))?);
                }
            }
        }
    }
    let all: Vec<ExactMatrix> = out.iter().flat_map(|s| s.basis.iter().map(|(m, _)| m.clone())).collect();
    let span = flat_span(dim, &all);
    if all.len() != module.dim() || span != module {
        return Err(not_hodge("summands do not reassemble the module".into()));
    }
    Ok(out)
}

fn summand(
    triple: &Sl2Triple,
    gl: &GlBigrading,
    kind: SummandKind,
    n: u32,
    eps: ExactMatrix,
    bar: Option<ExactMatrix>,
) -> Result<IrreducibleHodgeSummand> {
    let (p, q) = match kind {
        SummandKind::Trivial { d } => (-d, -d),
        SummandKind::Pair { p, q } => (p, q),
    };
    let mut basis = Vec::new();
    let mut push = |top: &ExactMatrix, (a, b): (i32, i32)| -> Result<()> {
        for k in 0..=n {
            let v = nu(&triple.n0, top, n, k);
            let t = (a + k as i32, b + (n - k) as i32);
            if !gl.frame.lies_in(&v, |r, s| (r, s) == t) {
                return Err(Error::invalid(format!("module not Hodge: ε⊗ν_{} is not of type {:?}", k, t)));
            }
            basis.push((v, t));
        }
        Ok(())
    };
    push(&eps, (p, q))?;
    if let Some(b) = &bar {
        push(b, (q, p))?;
    }
    Ok(IrreducibleHodgeSummand { kind, n, epsilon: eps, epsilon_conj: bar, basis, tau: GR::from_int(0) })
}
