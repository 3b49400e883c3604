//! Fitness of codes: the exact undetectable error rate, its truncated
//! approximation, and the logical-generator search it relies on.

mod lincomb;
mod qdistevol;
mod uer;

pub use lincomb::{expected_additions, lincombs_up_to, LinComb, LinCombSet};
pub use qdistevol::{qdistevol, qdistevol_generators, QDistEvolOutcome, QDistEvolParams};
pub use uer::{
    evaluate, max_depth, uer_approx, uer_approx_generators, uer_exact, uer_exact_capped,
    uer_exact_generators, EvaluationCost, FitnessMode, FitnessReport, DEFAULT_APPROX_DEPTH,
    EXACT_FITNESS_CAP,
};
