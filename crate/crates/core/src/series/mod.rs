//! Series solutions of the Nahm system attached to an sl₂-orbit and the
//! quantities built from them: β, g, f, B_m and C_ℓ.

pub mod beta;
pub mod hom;
pub mod integrate;
pub mod nahm;
pub mod power;

pub use beta::{apply_l, beta_assemble, check_beta, hierarchy_residual, lax_residual, nahm_residual, BetaChecks};
pub use hom::{casimir_pairing, HomMap, HomSpace, ModuleKind, Spectral};
pub use integrate::{ad_pow, b_coefficient, c_closed_form, c_coefficients, integrate_h, matching_factor, GSeries};
pub use nahm::{
    majorant, phi_recursion, phi_residual, psi_recursion, psi_residual, FreeParameters, HomSeries, HomSl2Series, HomUSeries,
    NahmSystem,
};
pub use power::HalfPowerSeries;
