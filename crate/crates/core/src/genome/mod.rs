//! Canonical genotype of stabiliser codes and everything derived from it:
//! check matrices, logical operators, destabilisers, encoding circuits,
//! import of arbitrary check matrices and exact distance.

mod circuit;
mod code;
mod genotype;
mod logicals;
mod shape;
mod standard_form;

pub use circuit::{encoding_circuit, is_symplectic, omega, EncodingCircuit, Gate};
pub use code::{build_code, CanonicalCode, StabiliserCode};
pub use genotype::{css_decode, decode, encode, CodeGenotype};
pub use logicals::{
    distance_exact, enumerate_nontrivial, logical_histogram, TypeHistogram,
    DISTANCE_ENUMERATION_CAP,
};
pub(crate) use logicals::pack_rows;
pub use shape::{genotype_length, CodeShape};
pub use standard_form::{standard_form, EchelonReport, StandardForm};
