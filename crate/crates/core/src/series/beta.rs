//! β(y) = Ad(h⁻¹(y))N assembled from Φ and Ψ, the operator 𝕃, and the
//! differential identities β must satisfy.

use serde::Serialize;

use super::nahm::{HomSl2Series, HomUSeries};
use super::power::HalfPowerSeries;
use crate::error::{Error, Result};
use crate::linalg::{rat, ExactMatrix, GR};
use crate::mhs::GlBigrading;

fn nu_plus() -> Vec<GR> {
    vec![GR::from_int(1), GR::i()]
}

fn nu_minus() -> Vec<GR> {
    vec![GR::from_int(1), -GR::i()]
}

/// 𝕃 = +i on n₊, 0 on n₀, −i on n₋ ⊕ Λ (bigrading at F_o). Components of
/// type (r,s) with r, s ≥ 0 other than (0,0) do not occur in g_ℂ and are
/// sent to zero.
pub fn apply_l(x: &ExactMatrix, gl: &GlBigrading) -> ExactMatrix {
    let plus = gl.frame.project(x, |r, s| r >= 0 && s < 0);
    let minus = gl.frame.project(x, |r, _| r < 0);
    &plus.scale(&GR::i()) - &minus.scale(&GR::i())
}

/// The β^{−1,−1} correction 2i∫[β^{0,−1}, β^{−1,0}]dy. With
/// β^{0,−1} = Ψ(ν₊)/2i and β^{−1,0} = −Ψ(ν₋)/2i its coefficient at
/// y^{−1−n/2} is −(i/(n+2)) Σ_{j+k=n} [Ψ_j(ν₊), Ψ_k(ν₋)].
pub fn lie_minus_two_correction(psi: &HomUSeries) -> HalfPowerSeries {
    let dim = psi.dim;
    let mut out = HalfPowerSeries::zero(dim, psi.order as i32 + 2);
    for n in 0..=psi.order {
        let mut acc = ExactMatrix::zeros(dim, dim);
        for j in 0..=n {
            acc = &acc + &psi.term(j).at(&nu_plus()).commutator(&psi.term(n - j).at(&nu_minus()));
        }
        out.set(n as i32 + 2, acc.scale(&GR::new(rat(0, 1), rat(-1, n as i64 + 2))));
    }
    out
}

/// β = N₋₂ + Φ(n₀) + Ψ(f) + 2i∫[β^{0,−1}, β^{−1,0}]dy; for type I both the
/// constant and the integral vanish.
pub fn beta_assemble(phi: &HomSl2Series, psi: &HomUSeries, n_minus2: &ExactMatrix, gl: &GlBigrading) -> Result<HalfPowerSeries> {
    let order = phi.order.min(psi.order) as i32 + 2;
    let mut beta = phi.basis_series(0).add(&psi.basis_series(1)).add(&lie_minus_two_correction(psi)).truncate(order);
    beta.add_to(0, n_minus2);
    check_beta_shape(&beta, gl)?;
    if !n_minus2.is_zero() {
        let b00 = beta.map(|c| gl.component(c, 0, 0));
        let bl = beta.map(|c| gl.component(c, -1, -1));
        if !b00.commutator(&bl).is_zero() {
            return Err(Error::invariant("[beta^{0,0}, beta^{-1,-1}] != 0"));
        }
    }
    Ok(beta)
}

/// Only the types (1,−1), (0,0), (−1,1), (0,−k), (−1,1−k) (k > 0) may occur.
pub fn check_beta_shape(beta: &HalfPowerSeries, gl: &GlBigrading) -> Result<()> {
    let allowed = |r: i32, s: i32| matches!((r, s), (1, -1) | (0, 0) | (-1, 1)) || (r == 0 && s < 0) || (r == -1 && s < 1);
    for (m, c) in beta.terms() {
        if !gl.frame.lies_in(c, allowed) {
            let bad: Vec<_> = gl.frame.support(c).into_iter().filter(|(r, s)| !allowed(*r, *s)).collect();
            return Err(Error::invariant(format!(
                "beta has Hodge components of types {:?} at y^(-{}/2): N is not horizontal in the required form",
                bad, m
            )));
        }
    }
    Ok(())
}

/// dβ/dy + [β, 𝕃β].
pub fn lax_residual(beta: &HalfPowerSeries, gl: &GlBigrading) -> HalfPowerSeries {
    let lb = beta.map(|c| apply_l(c, gl));
    let order = beta.order();
    beta.derivative().add(&beta.commutator(&lb)).truncate(order)
}

/// (X⁺, Z, X⁻) = (2iβ^{1,−1}, 2iβ^{0,0}, −2iβ^{−1,1}).
pub fn nahm_triple(beta: &HalfPowerSeries, gl: &GlBigrading) -> [HalfPowerSeries; 3] {
    let two_i = GR::new(rat(0, 1), rat(2, 1));
    [
        beta.map(|c| gl.component(c, 1, -1).scale(&two_i)),
        beta.map(|c| gl.component(c, 0, 0).scale(&two_i)),
        beta.map(|c| gl.component(c, -1, 1).scale(&-two_i.clone())),
    ]
}

/// −2X⁺′ − [Z,X⁺], 2X⁻′ − [Z,X⁻], −Z′ − [X⁺,X⁻].
pub fn nahm_residual(beta: &HalfPowerSeries, gl: &GlBigrading) -> [HalfPowerSeries; 3] {
    let [xp, z, xm] = nahm_triple(beta, gl);
    let o = beta.order();
    let two = GR::from_int(2);
    [
        xp.derivative().scale(&-two.clone()).sub(&z.commutator(&xp)).truncate(o),
        xm.derivative().scale(&two).sub(&z.commutator(&xm)).truncate(o),
        z.derivative().neg().sub(&xp.commutator(&xm)).truncate(o),
    ]
}

/// Row k of the extension hierarchy with α = 2𝕃β:
///   d/dy α^{−1,1−k} = ½[Z, α^{−1,1−k}] − [X⁻, α^{0,−k}] + τ₋ₖ,
///   d/dy α^{0,−k}   = −[X⁺, α^{−1,1−k}] − ½[Z, α^{0,−k}],
/// with τ₋ₖ = Σ_{r,s>0, r+s=k} [α^{0,−r}, α^{−1,1−s}].
pub fn hierarchy_residual(beta: &HalfPowerSeries, gl: &GlBigrading, k: i32) -> [HalfPowerSeries; 2] {
    let alpha = beta.map(|c| apply_l(c, gl).scale(&GR::from_int(2)));
    let comp = |r: i32, s: i32| alpha.map(|c| gl.component(c, r, s));
    let [xp, z, xm] = nahm_triple(beta, gl);
    let half = GR::from_frac(1, 2);
    let o = beta.order();
    let a = comp(-1, 1 - k);
    let b = comp(0, -k);
    let mut tau = HalfPowerSeries::zero(beta.dim(), o);
    for r in 1..k {
        tau = tau.add(&comp(0, -r).commutator(&comp(-1, 1 - (k - r))));
    }
    let rhs1 = z.commutator(&a).scale(&half).sub(&xm.commutator(&b)).add(&tau);
    let rhs2 = xp.commutator(&a).neg().sub(&z.commutator(&b).scale(&half));
    [a.derivative().sub(&rhs1).truncate(o), b.derivative().sub(&rhs2).truncate(o)]
}

/// Summary of the exact residual checks on β.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BetaChecks {
    /// Largest m such that every coefficient of y^{−m/2} was checked.
    pub checked_order: i32,
    pub lax_zero: bool,
    pub nahm_zero: bool,
    pub hierarchy_zero: [bool; 2],
}

pub fn check_beta(beta: &HalfPowerSeries, gl: &GlBigrading) -> BetaChecks {
    let nahm = nahm_residual(beta, gl);
    let h1 = hierarchy_residual(beta, gl, 1);
    let h2 = hierarchy_residual(beta, gl, 2);
    BetaChecks {
        checked_order: beta.order(),
        lax_zero: lax_residual(beta, gl).is_zero(),
        nahm_zero: nahm.iter().all(|r| r.is_zero()),
        hierarchy_zero: [h1.iter().all(|r| r.is_zero()), h2.iter().all(|r| r.is_zero())],
    }
}
