//! Integration of h⁻¹h′ = −𝕃β with h = g(y)e^{iyN₋₂}y^{−H/2}: the series
//! g⁻¹g′ = Σ_{m≥2} B_m y^{−m}, g = 1 + Σ g_k y^{−k}, f = g⁻¹, and the
//! coefficients C_{ℓ+1} = ((−i)^ℓ/ℓ!)(ad N₀)^ℓ B_{ℓ+1}.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::Serialize;

use super::beta::lie_minus_two_correction;
use super::nahm::{HomSl2Series, HomUSeries};
use super::power::HalfPowerSeries;
use crate::error::{Error, Result};
use crate::linalg::{rat, ExactMatrix, Rational, GR};
use crate::mhs::{Frame, GlBigrading};

/// g⁻¹g′, g and f = g⁻¹, normalized by g(∞) = 1.
#[derive(Clone, Debug, Serialize)]
pub struct GSeries {
    /// B_m, m ≥ 2.
    pub b: BTreeMap<u32, ExactMatrix>,
    /// g_k, k ≥ 0 (g₀ = 1).
    pub g: Vec<ExactMatrix>,
    pub f: Vec<ExactMatrix>,
}

impl GSeries {
    pub fn order(&self) -> usize {
        self.g.len() - 1
    }

    /// g(y) as a series in y^{−1/2} (only even exponents occur).
    pub fn g_series(&self) -> HalfPowerSeries {
        integer_series(&self.g)
    }

    pub fn f_series(&self) -> HalfPowerSeries {
        integer_series(&self.f)
    }

    pub fn b(&self, m: u32) -> ExactMatrix {
        let d = self.g[0].rows();
        self.b.get(&m).cloned().unwrap_or_else(|| ExactMatrix::zeros(d, d))
    }

    pub fn is_trivial(&self) -> bool {
        self.g.iter().skip(1).all(|x| x.is_zero())
    }
}

fn integer_series(c: &[ExactMatrix]) -> HalfPowerSeries {
    let mut s = HalfPowerSeries::zero(c[0].rows(), 2 * (c.len() as i32 - 1));
    for (k, x) in c.iter().enumerate() {
        s.set(2 * k as i32, x.clone());
    }
    s
}

/// Ad(y^{−H/2}) on a series: the ad H-weight k part of the coefficient of
/// y^{−m/2} moves to y^{−(m+k)/2}.
pub fn conjugate_by_y_h(s: &HalfPowerSeries, h_frame: &Frame, k_h: i32) -> HalfPowerSeries {
    let mut out = HalfPowerSeries::zero(s.dim(), s.order() - k_h);
    for (m, c) in s.terms() {
        for k in -k_h..=k_h {
            let part = h_frame.ad_component(c, k);
            if !part.is_zero() && m + k <= out.order() {
                out.add_to(m + k, &part);
            }
        }
    }
    out
}

/// B_m for 2 ≤ m, and g_k, f_k for k ≤ k_max. Φ and Ψ must be known to
/// order 2k_max + K_H, K_H the largest ad H eigenvalue.
pub fn integrate_h(phi: &HomSl2Series, psi: &HomUSeries, h: &ExactMatrix, h_frame: &Frame, k_max: u32) -> Result<GSeries> {
    let dim = h.rows();
    let k_h = max_ad_weight(h_frame);
    let need = 2 * k_max as i32 + k_h;
    if (phi.order.min(psi.order) as i32) < need {
        return Err(Error::invariant(format!("Phi and Psi must be known to order {} to integrate h to order {}", need, k_max)));
    }
    let minus_half = GR::from_frac(-1, 2);
    // −½Φ(h) − Ψ(e), conjugated by y^{−H/2}, plus H/(2y) and the Lie₋₂ term.
    let inner = phi.basis_series(1).scale(&minus_half).sub(&psi.basis_series(0));
    let mut d = conjugate_by_y_h(&inner, h_frame, k_h);
    d.add_to(2, &h.scale_q(&rat(1, 2)));
    d = d.add(&lie_minus_two_correction(psi).scale(&GR::i()));
    let valid = d.order();
    for (m, c) in d.terms() {
        if m > valid || c.is_zero() {
            continue;
        }
        if m <= 2 {
            return Err(Error::invariant(format!("nonzero y^(-{}/2) term in g^-1 g'", m)));
        }
        if m % 2 != 0 {
            return Err(Error::invariant(format!("half-integer power y^(-{}/2) in g^-1 g'", m)));
        }
    }
    let mut b = BTreeMap::new();
    for m in 2..=(valid / 2) as u32 {
        let c = d.coeff(2 * m as i32);
        if !c.is_zero() {
            b.insert(m, c);
        }
    }
    let zero = ExactMatrix::zeros(dim, dim);
    let bm = |m: u32| b.get(&m).cloned().unwrap_or_else(|| zero.clone());
    let mut g = vec![ExactMatrix::identity(dim)];
    let mut f = vec![ExactMatrix::identity(dim)];
    for k in 1..=k_max {
        let mut gk = zero.clone();
        let mut fk = zero.clone();
        for m in 2..=k + 1 {
            gk = &gk + &(&g[(k + 1 - m) as usize] * &bm(m));
            fk = &fk + &(&bm(m) * &f[(k + 1 - m) as usize]);
        }
        g.push(gk.scale_q(&rat(-1, k as i64)));
        f.push(fk.scale_q(&rat(1, k as i64)));
    }
    let out = GSeries { b, g, f };
    let gf = out.g_series().mul(&out.f_series()).truncate(2 * k_max as i32);
    if gf != HalfPowerSeries::constant(ExactMatrix::identity(dim), 2 * k_max as i32) {
        return Err(Error::invariant("g f != 1 to truncation order"));
    }
    Ok(out)
}

pub fn max_ad_weight(h_frame: &Frame) -> i32 {
    let l = &h_frame.labels;
    l.iter().flat_map(|a| l.iter().map(move |b| (a.0 - b.0).abs())).max().unwrap_or(0)
}

/// (ad X)^k Y.
pub fn ad_pow(x: &ExactMatrix, k: u32, y: &ExactMatrix) -> ExactMatrix {
    (0..k).fold(y.clone(), |acc, _| x.commutator(&acc))
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(rat(1, 1), |acc, j| acc * rat(j, 1))
}

/// C_{ℓ+1} = ((−i)^ℓ/ℓ!)(ad N₀)^ℓ B_{ℓ+1} for ℓ ≥ 1, after checking
/// (ad N₀)^m B_m = 0.
pub fn c_coefficients(gs: &GSeries, n0: &ExactMatrix) -> Result<BTreeMap<u32, ExactMatrix>> {
    for (m, bm) in &gs.b {
        if !ad_pow(n0, *m, bm).is_zero() {
            return Err(Error::invariant(format!("(ad N0)^{} B_{} != 0", m, m)));
        }
    }
    let top = gs.b.keys().max().copied().unwrap_or(1);
    let mut out = BTreeMap::new();
    for l in 1..top {
        let c = ad_pow(n0, l, &gs.b(l + 1)).scale(&GR::i_pow(-(l as i64))).scale_q(&factorial(l).recip());
        out.insert(l, c);
    }
    Ok(out)
}

/// b^t_{r,s}: the coefficient of x^t in (1 − x)^r (1 + x)^s.
pub fn b_coefficient(t: u32, r: u32, s: u32) -> Rational {
    let mut acc = BigInt::from(0);
    for a in 0..=t.min(r) {
        let bb = t - a;
        if bb > s {
            continue;
        }
        let term = binomial(BigInt::from(r), BigInt::from(a)) * binomial(BigInt::from(s), BigInt::from(bb));
        if a % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Rational::from_integer(acc)
}

/// i Σ_{p,q≥1, p+q≥ℓ+1} b^{ℓ−1}_{p−1,q−1} η^{−p,−q}, the Hodge components
/// taken in the bigrading of (F̂, relW).
pub fn c_closed_form(eta: &ExactMatrix, gl_hat: &GlBigrading, l: u32) -> ExactMatrix {
    let d = eta.rows();
    let mut acc = ExactMatrix::zeros(d, d);
    for (r, s) in gl_hat.frame.support(eta) {
        let (p, q) = (-r, -s);
        if p < 1 || q < 1 || p + q < l as i32 + 1 {
            continue;
        }
        let b = b_coefficient(l - 1, (p - 1) as u32, (q - 1) as u32);
        acc = &acc + &gl_hat.component(eta, r, s).scale_q(&b);
    }
    acc.scale(&GR::i())
}

/// 1 + Σ_{k>0} (1/k!)(−i)^k (ad N₀)^k g_k.
pub fn matching_factor(gs: &GSeries, n0: &ExactMatrix) -> ExactMatrix {
    let d = n0.rows();
    let mut acc = ExactMatrix::identity(d);
    for (k, gk) in gs.g.iter().enumerate().skip(1) {
        let k = k as u32;
        let t = ad_pow(n0, k, gk).scale(&GR::i_pow(-(k as i64))).scale_q(&factorial(k).recip());
        acc = &acc + &t;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_coefficients_low_orders() {
        for r in 0..4 {
            for s in 0..4 {
                assert_eq!(b_coefficient(0, r, s), rat(1, 1));
                assert_eq!(b_coefficient(1, r, s), rat(s as i64 - r as i64, 1));
            }
        }
        // (1−x)²(1+x) = 1 − x − x² + x³.
        assert_eq!(b_coefficient(2, 2, 1), rat(-1, 1));
        assert_eq!(b_coefficient(3, 2, 1), rat(1, 1));
    }
}

#[cfg(test)]
mod example82 {
    use super::*;
    use crate::series::beta::{beta_assemble, check_beta};
    use crate::series::nahm::tests::system;
    use crate::series::{phi_recursion, psi_recursion, ModuleKind};

    #[test]
    fn injected_s1_reproduces_the_finite_series() {
        let sys = system("example82");
        let n0 = sys.triple.n0.clone();
        let eta = ExactMatrix::e(3, 2, 0).scale(&GR::from_int(-1));
        let s1 = sys.parameter_from_lowest(ModuleKind::U, 1, &eta).unwrap();
        assert_eq!(s1.values[0], ExactMatrix::e(3, 2, 1));
        assert_eq!(s1.values[1], eta);
        assert!(sys.is_hodge_morphism(&s1));
        let mut s = BTreeMap::new();
        s.insert(1, s1.clone());
        let k_h = max_ad_weight(sys.h_frame());
        let order = 8 + k_h as u32;
        let phi = phi_recursion(&sys, &BTreeMap::new(), order).unwrap();
        let psi = psi_recursion(&sys, &phi, &s, order).unwrap();
        assert_eq!(psi.terms.len(), 1);
        let beta = beta_assemble(&phi, &psi, &ExactMatrix::zeros(3, 3), &sys.gl).unwrap();
        let terms: Vec<_> = beta.terms().map(|(m, c)| (m, c.clone())).collect();
        assert_eq!(terms, vec![(2, n0.clone()), (3, eta.clone())]);
        let checks = check_beta(&beta, &sys.gl);
        assert!(checks.lax_zero && checks.nahm_zero && checks.hierarchy_zero == [true, true], "{:?}", checks);
        let gs = integrate_h(&phi, &psi, &sys.triple.h, sys.h_frame(), 4).unwrap();
        assert_eq!(gs.g[1], s1.values[0]);
        assert!(gs.g[2..].iter().all(|x| x.is_zero()));
        let c = c_coefficients(&gs, &n0).unwrap();
        assert_eq!(c[&1], eta.scale(&GR::i()));
        assert_eq!(matching_factor(&gs, &n0), &ExactMatrix::identity(3) - &eta.scale(&GR::i()));
    }
}
