//! Linear maps between matrix stages: preservation tests, Jordan
//! certification, and decomposition into homomorphic and antihomomorphic parts.

mod decompose;
mod map;
mod verdict;

pub use decompose::{
    counterexample, counterexample_map, find_multiplicativity_failure, frobenius_form, jr_decompose,
    recover_inner, verify_split, Counterexample, DecompositionWitness, FrobeniusMode, Kind,
};
pub use map::MatLinearMap;
pub use verdict::{
    idempotent_corpus, jordan_check, jordan_pair_holds, maps_idempotents_to_idempotents,
    preserves_normalized_det, preserves_normalized_rank, standard_corpus, violates_det,
    violates_rank, CorpusSpec, Verdict, Witness,
};

use thiserror::Error;

use crate::exactla::{ExactMatrix, LinalgError};
use crate::invariants::RadicalValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreserverError {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("map and matrix live over different fields")]
    FieldMismatch,
    #[error("conjugating matrix is singular")]
    SingularConjugator,
    #[error("map does not send the identity to the identity")]
    NotUnital,
    #[error("map is not a Jordan homomorphism")]
    NotJordan(Box<(ExactMatrix, ExactMatrix)>),
    #[error("split idempotent is not unique ({} free directions)", directions.len())]
    AmbiguousSplit {
        particular: ExactMatrix,
        directions: Vec<ExactMatrix>,
    },
    #[error("no matrix satisfies the split conditions")]
    NoSolution,
    #[error("unique split solution is not idempotent")]
    NoIdempotentSolution(Box<ExactMatrix>),
    #[error("no invertible intertwiner exists")]
    NoInvertibleSolution,
    #[error("image of the identity is singular")]
    SingularUnitImage,
    #[error("normalized map is not a Jordan homomorphism")]
    NotJordanAfterNormalization(Box<(ExactMatrix, ExactMatrix)>),
    #[error("bijective map split into both a homomorphic and an antihomomorphic part")]
    MixedKindOnBijection,
    #[error("normalized determinant of XY is {0}, not 1")]
    UnitDetNotOne(RadicalValue),
    #[error("decomposition check failed: {0}")]
    VerificationFailed(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl PreserverError {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            PreserverError::SizeMismatch(_) => "SizeMismatch",
            PreserverError::FieldMismatch => "FieldMismatch",
            PreserverError::SingularConjugator => "SingularConjugator",
            PreserverError::NotUnital => "NotUnital",
            PreserverError::NotJordan(_) => "NotJordan",
            PreserverError::AmbiguousSplit { .. } => "AmbiguousSplit",
            PreserverError::NoSolution => "NoSolution",
            PreserverError::NoIdempotentSolution(_) => "NoIdempotentSolution",
            PreserverError::NoInvertibleSolution => "NoInvertibleSolution",
            PreserverError::SingularUnitImage => "SingularUnitImage",
            PreserverError::NotJordanAfterNormalization(_) => "NotJordanAfterNormalization",
            PreserverError::MixedKindOnBijection => "MixedKindOnBijection",
            PreserverError::UnitDetNotOne(_) => "UnitDetNotOne",
            PreserverError::VerificationFailed(_) => "VerificationFailed",
            PreserverError::BadParameters(_) => "BadParameters",
            PreserverError::Linalg(_) => "Linalg",
        }
    }
}
