//! Search for stabiliser quantum error-correction codes tailored to a Pauli
//! error model.
//!
//! Codes are encoded as fixed-length bit strings in which every string is a
//! valid code ([`genome`]). Fitness is the probability of an undetectable
//! logical error ([`fitness`]) and a (μ, λ) evolutionary search minimises
//! it ([`evolve`]). Probabilities are generic over [`Real`]; the aliases
//! below fix them to `f64`.

pub mod error;
pub mod evolve;
pub mod f2;
pub mod fitness;
pub mod genome;
pub mod io;
pub mod pauli;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use f2::{BitVec, F2Matrix};
pub use genome::{CodeGenotype, CodeShape, StabiliserCode};
pub use pauli::PauliOp;
pub use scalar::Real;

pub type ErrorModel64 = pauli::ErrorModel<f64>;
pub type FitnessReport64 = fitness::FitnessReport<f64>;
pub type QDistEvolOutcome64 = fitness::QDistEvolOutcome<f64>;
pub type SearchConfig64 = evolve::SearchConfig<f64>;
pub type SearchResult64 = evolve::SearchResult<f64>;
