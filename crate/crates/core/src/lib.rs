//! Exact computations in unital locally matrix algebras.
//!
//! An algebra is modelled as an embedding tower `M_{n₁} ⊂ M_{n₂} ⊂ ⋯` over `Q` or
//! `Q(i)`. The crate computes its Steinitz number, the normalized rank and
//! normalized determinant of its elements, and analyzes linear maps between
//! matrix stages: rank and determinant preservation, Jordan certification,
//! splitting into homomorphic and antihomomorphic parts, and recovery of the
//! form `φ(a) = X·ψ(a)·Y`.

pub mod algebra;
pub mod cli;
pub mod clifford;
pub mod exactla;
pub mod invariants;
pub mod json;
pub mod preserver;
pub mod sample;
pub mod steinitz;

pub use algebra::{Element, TowerDescriptor};
pub use exactla::{ExactMatrix, Field, Poly, Scalar};
pub use invariants::RadicalValue;
pub use preserver::{DecompositionWitness, Kind, MatLinearMap, Verdict};
pub use steinitz::Steinitz;
