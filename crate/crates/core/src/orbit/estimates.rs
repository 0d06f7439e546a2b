//! Consequences of the expansion: norm estimates along the orbit, the
//! limiting grading, and the shape e^{(x+iy)N}.F = e^{xN}h(y).F_o.

use serde::Serialize;

use super::distance::filtration_distance_sq;
use super::expand::OrbitExpansion;
use super::split::SplitOrbit;
use crate::error::Result;
use crate::linalg::{kernel, rat, rat_to_f64, ExactMatrix, Rational, Subspace, GR};
use crate::mhs::{grading_of, mixed_hodge_metric, sectional_curvature, Grading, MixedHodgeData, SectionalCurvature};

/// Ratios ‖v‖²/y^k may vary by at most this factor across the samples.
pub const BOUNDED_SPREAD: f64 = 1e3;

/// Default sample points for the norm estimates.
pub fn default_norm_samples() -> Vec<Rational> {
    [1, 2, 3, 5, 10, 100, 1000].iter().map(|y| rat(*y, 1)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NormEntry {
    /// H-eigenvalue of v.
    pub k: i32,
    pub vector: Vec<String>,
    /// ‖v‖²_{e^{iyN}.F̂} = y^k ‖v‖²_{F_o} held exactly at every sample.
    pub split_identity: bool,
    /// ‖v‖²_{e^{iyN}.F} / (y^k ‖v‖²_{F_o}), absent where (e^{iyN}.F, W) is
    /// not yet a polarized mixed Hodge structure.
    pub ratios: Vec<Option<f64>>,
    /// max/min of the available ratios.
    pub spread: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub y_samples: Vec<f64>,
    pub entries: Vec<NormEntry>,
    pub split_exact: bool,
    pub bounded: bool,
}

fn pow(y: &Rational, k: i32) -> Rational {
    let base = if k >= 0 { y.clone() } else { y.recip() };
    (0..k.unsigned_abs()).fold(rat(1, 1), |acc, _| acc * &base)
}

/// Checks ‖v‖² ~ y^k for every H-eigenvector v ∈ ker N₋₂.
pub fn verify_norm_estimates(exp: &OrbitExpansion, y_samples: &[Rational]) -> Result<NormReport> {
    let ctx = &exp.ctx;
    let dim = ctx.dim();
    let n = &ctx.split.n;
    let h_o = exp.metric_at_f_o()?;
    let ker = Subspace::span(dim, kernel(&exp.sl2.n_minus2));
    let hg = exp.sl2.triple.h_grading()?;
    let mut hats = Vec::new();
    let mut full = Vec::new();
    for y in y_samples {
        let e = n.scale(&GR::imag(y.clone())).exp_nilpotent();
        hats.push(mixed_hodge_metric(&ctx.data, &exp.f_hat.transform(&e))?);
        full.push(mixed_hodge_metric(&ctx.data, &ctx.data.f.transform(&e)).ok());
    }
    let mut entries = Vec::new();
    for (k, e) in &hg.eigenspaces {
        for v in e.intersect(&ker)?.basis() {
            let base = h_o.norm_sq(v);
            let mut split_identity = true;
            let mut ratios = Vec::new();
            for (i, y) in y_samples.iter().enumerate() {
                let expected = &base * &pow(y, *k);
                split_identity &= hats[i].norm_sq(v) == expected;
                ratios.push(full[i].as_ref().map(|m| rat_to_f64(&(m.norm_sq(v) / &expected))));
            }
            let avail: Vec<f64> = ratios.iter().flatten().copied().collect();
            let hi = avail.iter().cloned().fold(f64::MIN, f64::max);
            let lo = avail.iter().cloned().fold(f64::MAX, f64::min);
            let spread = if avail.is_empty() || lo <= 0.0 { f64::INFINITY } else { hi / lo };
            entries.push(NormEntry { k: *k, vector: v.iter().map(|x| x.to_string()).collect(), split_identity, ratios, spread });
        }
    }
    Ok(NormReport {
        y_samples: y_samples.iter().map(rat_to_f64).collect(),
        split_exact: entries.iter().all(|e| e.split_identity),
        bounded: entries.iter().all(|e| e.spread <= BOUNDED_SPREAD),
        entries,
    })
}

/// Y_∞ = e^{iδ}.Y.
pub fn limiting_grading(exp: &OrbitExpansion) -> Grading {
    let g = exp.delta.scale(&GR::i()).exp_nilpotent();
    let g_inv = exp.delta.scale(&-GR::i()).exp_nilpotent();
    exp.sl2.y.conjugate_by(&g, &g_inv)
}

/// Largest entry of e^{−iyN}Y_{(e^{iyN}.F, W)}e^{iyN} − Y_∞.
pub fn limiting_grading_gap(exp: &OrbitExpansion, y: &Rational) -> Result<f64> {
    let ctx = &exp.ctx;
    let x = ctx.split.n.scale(&GR::imag(y.clone()));
    let e = x.exp_nilpotent();
    let e_inv = (-&x).exp_nilpotent();
    let yy = grading_of(&ctx.data.f.transform(&e), &ctx.split.w)?.y;
    let pulled = &(&e_inv * &yy) * &e;
    Ok((&pulled - &limiting_grading(exp).y).max_abs_f64())
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeSample {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
    pub exact_zero: bool,
}

/// e^{(x+iy)N}.F against e^{xN}h(y).F_o at y = t², measured in h_{F_o}.
pub fn corollary43_shape(exp: &OrbitExpansion, samples: &[(Rational, Rational)]) -> Result<Vec<ShapeSample>> {
    let ctx = &exp.ctx;
    let metric = exp.metric_at_f_o()?;
    let n = &ctx.split.n;
    let mut out = Vec::new();
    for (x, t) in samples {
        let y = t * t;
        let z = GR::new(x.clone(), y.clone());
        let a = ctx.data.f.transform(&n.scale(&z).exp_nilpotent());
        let ex: ExactMatrix = n.scale(&GR::real(x.clone())).exp_nilpotent();
        let b = ctx.split.f_o.transform(&(&ex * &exp.h.eval_at_square(t)));
        let d2 = filtration_distance_sq(&metric, &a, &b);
        out.push(ShapeSample {
            x: rat_to_f64(x),
            y: rat_to_f64(&y),
            residual: rat_to_f64(&d2).max(0.0).sqrt(),
            exact_zero: d2 == rat(0, 1),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitingCurvature {
    /// "xi" for ξ = ¼(iH + N₀ + N₀⁺), "N" when ξ = 0.
    pub direction: String,
    pub curvature: SectionalCurvature,
}

/// Sectional curvature at F_o along ξ = N^{−1,1} = ¼(iH + N₀ + N₀⁺), the
/// limit of the curvature along the orbit, or along N itself when ξ = 0.
pub fn limiting_curvature(data: &MixedHodgeData, split: &SplitOrbit) -> Result<LimitingCurvature> {
    let t = &split.sl2.triple;
    let xi = (&(&t.h.scale(&GR::i()) + &t.n0) + &t.n0_plus).scale_q(&rat(1, 4));
    let (direction, u) = if xi.is_zero() { ("N", split.n.clone()) } else { ("xi", xi) };
    let curvature = sectional_curvature(&data.with_f(split.f_o.clone()), &split.f_o, &u)?;
    Ok(LimitingCurvature { direction: direction.to_string(), curvature })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;
    use crate::orbit::expand_orbit;

    #[test]
    fn split_type_i_norms_scale_exactly() {
        let e = expand_orbit(&load("type_i").unwrap(), 2).unwrap();
        let r = verify_norm_estimates(&e, &default_norm_samples()).unwrap();
        assert!(r.split_exact && r.bounded, "{:?}", r);
        let ks: Vec<i32> = r.entries.iter().map(|x| x.k).collect();
        assert_eq!(ks, vec![-1, 0, 1]);
    }

    #[test]
    fn split_limiting_grading_is_y() {
        let e = expand_orbit(&load("type_i").unwrap(), 2).unwrap();
        assert_eq!(limiting_grading(&e).y, e.sl2.y.y);
    }

    #[test]
    fn hodge_tate_limiting_grading() {
        let e = expand_orbit(&load("hodge_tate").unwrap(), 2).unwrap();
        let y = limiting_grading(&e).y;
        let gap = limiting_grading_gap(&e, &rat(10_000, 1)).unwrap();
        assert!(gap < 1e-9, "{}", gap);
        assert!(y != e.sl2.y.y);
    }

    #[test]
    fn curvature_signs() {
        let d = load("type_i").unwrap();
        let c = limiting_curvature(&d, &crate::orbit::split_orbit(&d).unwrap()).unwrap();
        assert_eq!(c.direction, "xi");
        assert!(c.curvature.value < rat(0, 1) && c.curvature.agrees);
        let d = load("hodge_tate").unwrap();
        let c = limiting_curvature(&d, &crate::orbit::split_orbit(&d).unwrap()).unwrap();
        assert_eq!(c.curvature.value, rat(0, 1));
    }

    #[test]
    fn shape_is_exact_for_finite_series() {
        for name in ["split", "hodge_tate", "example82"] {
            let e = expand_orbit(&load(name).unwrap(), 4).unwrap();
            let s = corollary43_shape(&e, &[(rat(0, 1), rat(10, 1)), (rat(3, 2), rat(7, 1))]).unwrap();
            assert!(s.iter().all(|x| x.exact_zero), "{}: {:?}", name, s);
        }
    }
}
