//! Bundled problem files, also shipped under `fixtures/`.

use crate::error::{Error, Result};
use crate::mhs::MixedHodgeData;
use crate::problem::parse_problem;

pub const NAMES: [&str; 7] = ["example538", "example540", "example82", "split", "hodge_tate", "type_i", "perturbed"];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "example538" => include_str!("../fixtures/example538.toml"),
        "example540" => include_str!("../fixtures/example540.toml"),
        "example82" => include_str!("../fixtures/example82.toml"),
        "split" => include_str!("../fixtures/split.toml"),
        "hodge_tate" => include_str!("../fixtures/hodge_tate.toml"),
        "type_i" => include_str!("../fixtures/type_i.toml"),
        "perturbed" => include_str!("../fixtures/perturbed.toml"),
        _ => return None,
    })
}

pub fn load(name: &str) -> Result<MixedHodgeData> {
    parse_problem(source(name).ok_or_else(|| Error::invalid(format!("no fixture named '{}'", name)))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtrations::check_admissible_orbit;
    use crate::mhs::validate;

    #[test]
    fn every_fixture_is_valid_and_admissible() {
        for name in NAMES {
            let d = load(name).unwrap();
            let r = validate(&d);
            assert!(r.is_valid(), "{}: {:?}", name, r.errors);
            let a = check_admissible_orbit(&d);
            assert!(a.is_admissible(), "{}: {:?}", name, a.errors);
        }
    }
}
