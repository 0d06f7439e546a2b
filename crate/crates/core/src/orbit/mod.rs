//! The SL₂-orbit pipeline for orbits of types I and II.

pub mod distance;
pub mod estimates;
pub mod expand;
pub mod matching;
pub mod split;

pub use distance::{filtration_distance_sq, orthogonal_projector, subspace_distance_sq};
pub use estimates::{
    corollary43_shape, default_norm_samples, limiting_curvature, limiting_grading, limiting_grading_gap, verify_norm_estimates, LimitingCurvature, NormEntry, NormReport,
    ShapeSample,
};
pub use expand::{expand_orbit, expand_with, OrbitExpansion, ResidualReport, ResidualSample};
pub use matching::{match_parameters, Matching, OrbitContext};
pub use split::{orbit_type, split_orbit, SplitOrbit};
