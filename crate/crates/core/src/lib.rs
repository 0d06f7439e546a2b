//! Exact computation of the asymptotic structure of degenerating mixed Hodge
//! structures: Deligne bigradings, δ-splittings, sl₂-orbit data, the series
//! g(y) of the SL₂-orbit theorem for orbits of types I and II, and
//! archimedean height asymptotics.
//!
//! Everything is computed over ℚ(i) with exact rationals. Floating point only
//! appears at the very end of residual and height evaluations.

pub mod error;
pub mod filtrations;
pub mod fixtures;
pub mod heights;
pub mod linalg;
pub mod mhs;
pub mod orbit;
pub mod problem;
pub mod series;
pub mod sl2;

pub use error::{Error, Result};
