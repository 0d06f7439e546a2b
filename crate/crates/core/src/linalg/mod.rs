//! Exact linear algebra over the Gaussian rationals.

pub mod gaussian;
pub mod matrix;
pub mod solve;
pub mod subspace;

pub use gaussian::{rat, rat_int, rat_to_f64, ser_rational, GaussianRational, Rational, GR};
pub use matrix::{dot_h, unit_vector, vec_add, vec_conj, vec_is_zero, vec_scale, vec_sub, ExactMatrix, Vector};
pub use solve::{apply_eigen_projection, check_semisimple, eigen_projection, kernel, rref, solve_linear};
pub use subspace::{is_direct_sum_decomposition, Subspace};
