//! Monodromy and relative weight filtrations, admissibility, monodromy cones.

pub mod admissible;
pub mod cone;
pub mod monodromy;
pub mod relative;

pub use admissible::{check_admissible_orbit, AdmissibilityReport};
pub use cone::{cone_filtration_constancy, MonodromyCone};
pub use monodromy::{is_monodromy_filtration, monodromy_weight_filtration, nilpotency_index};
pub use relative::{graded_action, is_relative_weight_filtration, relative_weight_filtration};
