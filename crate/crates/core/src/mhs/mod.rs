//! Mixed Hodge structures and the structures they induce.

pub mod bigrading;
pub mod data;
pub mod filtration;

pub use bigrading::{deligne_bigrading, gl_bigrading, grading_of, joint_frame, Bigrading, Frame, GlBigrading, Grading};
pub use data::{validate, HeightBlock, MixedHodgeData, Nilpotent, TypeTag, ValidationReport};
pub use filtration::{DecreasingFiltration, IncreasingFiltration};
pub mod curvature;
pub mod metric;
pub mod splitting;

pub use curvature::{curvature, sectional_curvature, SectionalCurvature, TangentSpace};
pub use metric::{mixed_hodge_metric, HodgeMetric};
pub use splitting::{ad_exp_apply, delta_splitting, DeltaSplitting};
