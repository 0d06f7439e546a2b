//! Admissibility of a nilpotent orbit z ↦ e^{zN}.F.

use serde::Serialize;

use super::relative::relative_weight_filtration;
use crate::mhs::{deligne_bigrading, gl_bigrading, IncreasingFiltration, MixedHodgeData};

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub horizontal: bool,
    pub relative_filtration_exists: bool,
    pub limit_is_mhs: bool,
    /// N maps I^{p,q} into I^{p−1,q−1} plus terms of lower type.
    pub n_is_morphism: bool,
    /// N maps I^{p,q} into I^{p−1,q−1} exactly.
    pub n_type_exact: bool,
    #[serde(skip)]
    pub relative: Option<IncreasingFiltration>,
    pub errors: Vec<String>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.horizontal && self.relative_filtration_exists && self.limit_is_mhs && self.n_is_morphism
    }
}

/// Checks horizontality, existence of relW(N, W) for the combined N, that
/// (F, relW) is a mixed Hodge structure and that N is a (−1,−1)-morphism of it.
pub fn check_admissible_orbit(data: &MixedHodgeData) -> AdmissibilityReport {
    let n = data.combined_n();
    let mut r = AdmissibilityReport {
        horizontal: data.f.is_shifted_by(&n, -1),
        relative_filtration_exists: false,
        limit_is_mhs: false,
        n_is_morphism: false,
        n_type_exact: false,
        relative: None,
        errors: Vec::new(),
    };
    if !r.horizontal {
        r.errors.push("N(F^p) is not contained in F^(p-1)".into());
    }
    match relative_weight_filtration(&n, &data.w) {
        Ok(Some(m)) => {
            r.relative_filtration_exists = true;
            r.relative = Some(m);
        }
        Ok(None) => r.errors.push("the relative weight filtration relW(N, W) does not exist".into()),
        Err(e) => r.errors.push(e.to_string()),
    }
    if let Some(m) = &r.relative {
        match deligne_bigrading(&data.f, m) {
            Ok(bg) => {
                r.limit_is_mhs = true;
                let gl = gl_bigrading(&bg);
                let support = gl.frame.support(&n);
                r.n_type_exact = support.iter().all(|&t| t == (-1, -1));
                r.n_is_morphism = support.iter().all(|&(a, b)| (a, b) == (-1, -1) || (a < -1 && b < -1));
                if !r.n_is_morphism {
                    r.errors.push("N is not a (-1,-1)-morphism of (F, relW)".into());
                }
            }
            Err(e) => r.errors.push(format!("(F, relW) is not a mixed Hodge structure: {}", e)),
        }
    }
    r
}
