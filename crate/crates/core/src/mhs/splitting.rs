//! The δ-splitting of a mixed Hodge structure.

use super::bigrading::{deligne_bigrading, gl_bigrading};
use super::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::error::{Error, Result};
use crate::linalg::{rat, ExactMatrix, GR};

#[derive(Clone, Debug)]
pub struct DeltaSplitting {
    pub delta: ExactMatrix,
    pub f_hat: DecreasingFiltration,
}

/// Solves Ad(e^X)Y = Ȳ degree by degree in ad Y, with X = −2iδ. Writing
/// X = Σ_{k≥1} X₋ₖ, the degree −k part reads k·X₋ₖ + (terms in X₋ⱼ, j<k)
/// = Ȳ₋ₖ.
pub fn delta_splitting(f: &DecreasingFiltration, w: &IncreasingFiltration) -> Result<DeltaSplitting> {
    let bg = deligne_bigrading(f, w)?;
    let n = f.dim();
    let ws = w.weights();
    if ws.len() <= 1 {
        return Ok(DeltaSplitting { delta: ExactMatrix::zeros(n, n), f_hat: f.clone() });
    }
    let grading = bg.grading();
    let y = &grading.y;
    let ybar = y.conj();
    let frame = grading.frame();
    let depth = ws[ws.len() - 1] - ws[0];
    let mut x = ExactMatrix::zeros(n, n);
    for k in 1..=depth {
        let ad_y = ad_exp_apply(&x, y);
        let rhs = frame.ad_component(&(&ybar - &ad_y), -k);
        x = &x + &rhs.scale_q(&rat(1, k as i64));
    }
    // δ = (i/2) X.
    let delta = x.scale(&GR::new(rat(0, 1), rat(1, 2)));
    let minus_two_i_delta = delta.scale(&GR::new(rat(0, 1), rat(-2, 1)));
    if ad_exp_apply(&minus_two_i_delta, y) != ybar {
        return Err(Error::invariant("δ-splitting: Ad(e^{-2iδ})Y differs from the conjugate grading"));
    }
    if !delta.is_real() {
        return Err(Error::invariant("δ-splitting: δ is not real"));
    }
    let gl = gl_bigrading(&bg);
    if !gl.frame.lies_in(&delta, |r, s| r < 0 && s < 0) {
        return Err(Error::invariant("δ-splitting: δ does not lie in Λ^{-1,-1}"));
    }
    let g = delta.scale(&GR::new(rat(0, 1), rat(-1, 1))).exp_nilpotent();
    let f_hat = f.transform(&g);
    let split = deligne_bigrading(&f_hat, w)?;
    if !split.is_split() {
        return Err(Error::invariant("δ-splitting: e^{-iδ}.F is not split over R"));
    }
    Ok(DeltaSplitting { delta, f_hat })
}

/// Ad(e^X)Y = e^{ad X} Y for nilpotent X.
pub fn ad_exp_apply(x: &ExactMatrix, y: &ExactMatrix) -> ExactMatrix {
    let mut term = y.clone();
    let mut acc = y.clone();
    let mut k = 1i64;
    loop {
        term = x.commutator(&term).scale_q(&rat(1, k));
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
        k += 1;
    }
    acc
}
