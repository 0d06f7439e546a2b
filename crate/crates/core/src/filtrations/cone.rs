//! Open cones of commuting nilpotent endomorphisms.

use super::monodromy::monodromy_weight_filtration;
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Rational, GR};

/// {Σ λ_j N_j : λ_j > 0} for pairwise commuting nilpotent N_j.
#[derive(Clone, Debug)]
pub struct MonodromyCone {
    generators: Vec<ExactMatrix>,
}

impl MonodromyCone {
    pub fn new(generators: Vec<ExactMatrix>) -> Result<Self> {
        for (i, a) in generators.iter().enumerate() {
            if !a.is_nilpotent() {
                return Err(Error::invalid(format!("cone generator {} is not nilpotent", i)));
            }
            for (j, b) in generators.iter().enumerate().skip(i + 1) {
                if !a.commutator(b).is_zero() {
                    return Err(Error::invalid(format!("cone generators {} and {} do not commute", i, j)));
                }
            }
        }
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &[ExactMatrix] {
        &self.generators
    }

    /// Σ λ_j N_j.
    pub fn element(&self, lambda: &[Rational]) -> Result<ExactMatrix> {
        if lambda.len() != self.generators.len() {
            return Err(Error::invalid(format!(
                "expected {} coefficients, got {}",
                self.generators.len(),
                lambda.len()
            )));
        }
        let dim = self.generators.first().map_or(0, |g| g.rows());
        Ok(self
            .generators
            .iter()
            .zip(lambda)
            .fold(ExactMatrix::zeros(dim, dim), |acc, (g, l)| &acc + &g.scale(&GR::real(l.clone()))))
    }
}

/// True iff W(N(λ)) is the same filtration for every sampled λ.
pub fn cone_filtration_constancy(cone: &MonodromyCone, samples: &[Vec<Rational>]) -> Result<bool> {
    let mut first = None;
    let mut constant = true;
    for lambda in samples {
        if lambda.iter().any(|l| *l <= Rational::from_integer(0.into())) {
            return Err(Error::invalid("cone coefficients must be strictly positive"));
        }
        let m = monodromy_weight_filtration(&cone.element(lambda)?, 0)?;
        match &first {
            None => first = Some(m),
            Some(f) => constant &= *f == m,
        }
    }
    Ok(constant)
}
