//! From an admissible orbit to its split orbit and sl₂-data.

use crate::error::{Error, Result};
use crate::filtrations::check_admissible_orbit;
use crate::linalg::{ExactMatrix, GR};
use crate::mhs::{
    deligne_bigrading, delta_splitting, grading_of, validate, DecreasingFiltration, IncreasingFiltration, MixedHodgeData,
    TypeTag,
};
use crate::sl2::{sl2_data, Sl2Data};

#[derive(Clone, Debug)]
pub struct SplitOrbit {
    pub n: ExactMatrix,
    pub type_tag: TypeTag,
    pub w: IncreasingFiltration,
    pub rel_w: IncreasingFiltration,
    pub f: DecreasingFiltration,
    /// (F, relW) = (e^{iδ}.F̂, relW).
    pub delta: ExactMatrix,
    pub f_hat: DecreasingFiltration,
    pub sl2: Sl2Data,
    /// F_o = e^{iN₀}.F̂.
    pub f_o: DecreasingFiltration,
}

impl SplitOrbit {
    pub fn dim(&self) -> usize {
        self.n.rows()
    }
}

/// Resolves the declared or detected shape; only pure, I and II are handled.
pub fn orbit_type(data: &MixedHodgeData) -> Result<TypeTag> {
    let report = validate(data);
    match (data.type_tag, report.detected_type) {
        (Some(d), Some(t)) if d != t => Err(Error::invalid(format!("declared type {} but the data has type {}", d, t))),
        (Some(d), _) => Ok(d),
        (None, Some(t)) => Ok(t),
        (None, None) => Err(Error::unsupported("weight filtration is neither pure nor of type I or II")),
    }
}

pub fn split_orbit(data: &MixedHodgeData) -> Result<SplitOrbit> {
    let type_tag = orbit_type(data)?;
    let adm = check_admissible_orbit(data);
    if !adm.is_admissible() {
        return Err(Error::invalid(format!("orbit is not admissible: {}", adm.errors.join("; "))));
    }
    let rel_w = adm.relative.clone().ok_or_else(|| Error::invariant("admissible orbit without relW"))?;
    let n = data.combined_n();
    let split = delta_splitting(&data.f, &rel_w)?;
    let rel_y = deligne_bigrading(&split.f_hat, &rel_w)?.grading();
    let sl2 = sl2_data(&n, &rel_y, &data.w)?;
    let f_o = split.f_hat.transform(&sl2.n0.scale(&GR::i()).exp_nilpotent());
    if type_tag != TypeTag::II && !sl2.n_minus2.is_zero() {
        return Err(Error::invariant("N_-2 != 0 for an orbit of type I"));
    }
    // Y is the grading of (F_o, W) and preserves F̂.
    if grading_of(&f_o, &data.w)?.y != sl2.y.y {
        return Err(Error::invariant("Y is not the grading of (F_o, W)"));
    }
    if !split.f_hat.is_preserved_by(&sl2.y.y) {
        return Err(Error::invariant("Y does not preserve F_hat"));
    }
    Ok(SplitOrbit { n, type_tag, w: data.w.clone(), rel_w, f: data.f.clone(), delta: split.delta, f_hat: split.f_hat, sl2, f_o })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;
    use crate::linalg::{rat, Subspace};

    fn with_exponents(name: &str, a1: i64, a2: i64) -> MixedHodgeData {
        let mut d = load(name).unwrap();
        d.nilpotents[0].matrix = d.nilpotents[0].matrix.scale(&GR::from_int(a1));
        d.nilpotents[1].matrix = d.nilpotents[1].matrix.scale(&GR::from_int(a2));
        d
    }

    fn v(xs: &[GR]) -> Vec<GR> {
        xs.to_vec()
    }

    #[test]
    fn split_input_has_zero_delta() {
        let d = load("type_i").unwrap();
        let s = split_orbit(&d).unwrap();
        assert!(s.delta.is_zero());
        assert_eq!(s.f_hat, d.f);
        assert_eq!(s.sl2.triple.h, ExactMatrix::from_ints(3, 3, &[1, 0, 0, 0, -1, 0, 0, 0, 0]));
        // Thm 3.16 (a): N₋₂ is a highest weight vector of weight 0.
        assert!(s.sl2.n_minus2.is_zero());
    }

    #[test]
    fn hodge_tate_orbit() {
        let s = split_orbit(&load("hodge_tate").unwrap()).unwrap();
        assert_eq!(s.delta, ExactMatrix::e(2, 1, 0));
        assert!(s.sl2.n0.is_zero() && s.sl2.triple.h.is_zero());
        assert_eq!(s.sl2.n_minus2, s.n);
    }

    #[test]
    fn example82_delta() {
        let s = split_orbit(&load("example82").unwrap()).unwrap();
        assert_eq!(s.delta, ExactMatrix::e(3, 2, 0));
    }

    #[test]
    fn example538_grading_at_one_one() {
        let s = split_orbit(&with_exponents("example538", 1, 1)).unwrap();
        let y = &s.sl2.y;
        let o = GR::from_int(0);
        let l = GR::from_int(1);
        assert_eq!(y.eigenspace(0), Subspace::span(4, vec![v(&[l.clone(), o.clone(), o.clone(), o.clone()])]));
        assert_eq!(y.eigenspace(-2), Subspace::span(4, vec![v(&[o.clone(), o.clone(), o.clone(), l.clone()])]));
        assert_eq!(
            y.eigenspace(-1),
            Subspace::span(4, vec![v(&[o.clone(), l.clone(), o.clone(), o.clone()]), v(&[o.clone(), o.clone(), l, o])])
        );
    }

    #[test]
    fn example538_n_minus2_gives_mu() {
        // N₋₂(e₀′) = μ e₋₂ with μ = 4a₁a₂/(a₁+a₂).
        for (a1, a2) in [(1i64, 1i64), (1, 2), (2, 3)] {
            let s = split_orbit(&with_exponents("example538", a1, a2)).unwrap();
            let e0p = s.sl2.y.eigenspace(0).basis()[0].clone();
            let img = s.sl2.n_minus2.apply(&e0p);
            let mu = GR::real(rat(4 * a1 * a2, a1 + a2));
            assert_eq!(img, vec![GR::from_int(0), GR::from_int(0), GR::from_int(0), &mu * &e0p[0]]);
        }
    }

    #[test]
    fn example540_grading() {
        for (a1, a2) in [(1i64, 1i64), (1, 2), (2, 3), (3, 1)] {
            let s = split_orbit(&with_exponents("example540", a1, a2)).unwrap();
            let y = &s.sl2.y;
            let h = GR::real(rat(a1 - a2, a1 + a2));
            let (o, l) = (GR::from_int(0), GR::from_int(1));
            assert_eq!(y.eigenspace(0), Subspace::span(4, vec![v(&[l.clone(), o.clone(), o.clone(), o.clone()])]));
            assert!(y.eigenspace(-1).contains(&[o.clone(), o.clone(), l, h]));
            let mu = GR::from_int(a1 + a2);
            assert_eq!(s.sl2.n_minus2.apply(&[GR::from_int(1), o.clone(), o.clone(), o.clone()]), vec![o.clone(), o.clone(), o, mu]);
        }
    }
}
