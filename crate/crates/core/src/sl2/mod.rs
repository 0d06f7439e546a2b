//! sl₂-triples attached to admissible nilpotent orbits.

pub mod grading;
pub mod hodge_modules;
pub mod isotypical;
pub mod triple;

pub use grading::{deligne_grading, sl2_data, split_n, Sl2Data};
pub use hodge_modules::{decompose_weight_minus_one, nu, nu_coefficients, IrreducibleHodgeSummand, SummandKind};
pub use isotypical::{isotypical, isotypical_gl, IrreducibleString, IsotypicalDecomposition, Sl2Rep};
pub use triple::{ad_operator, sl2_complete, Sl2Triple};
