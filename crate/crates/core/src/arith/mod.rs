//! Exact arithmetic: rationals, linear forms, sparse polynomials and
//! rational functions with linear denominators.

pub mod factored;
pub mod linform;
pub mod mpoly;
pub mod rat;

pub use factored::{FactoredRat, TaggedFactor};
pub use linform::LinForm;
pub use mpoly::{Homogeneity, MPoly};
pub use rat::Rat;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero linear form cannot be a denominator factor")]
    ZeroLinearForm,
    #[error("not a homogeneous linear form: {0}")]
    NotLinear(String),
    #[error("point for z{var} involves z{var}")]
    SelfReferentialPoint { var: usize },
    #[error("substituting z{var} makes a denominator factor vanish")]
    PoleOnSubstitution { var: usize },
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableCount { expected: usize, found: usize },
}

impl LinForm {
    /// Reads a homogeneous linear polynomial as a form. Constant terms and
    /// higher-degree terms are rejected.
    pub fn from_mpoly(p: &MPoly) -> Result<LinForm, ArithError> {
        let mut coeffs = vec![Rat::default(); p.nvars()];
        for (e, c) in p.terms() {
            let deg: u32 = e.iter().sum();
            if deg != 1 {
                return Err(ArithError::NotLinear(p.to_string()));
            }
            let j = e.iter().position(|&k| k == 1).unwrap();
            coeffs[j] = c.clone();
        }
        Ok(LinForm::new(coeffs))
    }
}
