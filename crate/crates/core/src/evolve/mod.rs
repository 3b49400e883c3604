//! Evolutionary search over code genotypes.

mod operators;
mod profile;
mod search;

pub use operators::{
    cross, cross_at, mutate_per_bit, mutate_single_bit, CrossType, MutationMode,
    DEFAULT_MUTATION_RATE,
};
pub use profile::{hamming_fitness_profile, mean_by_distance, HammingRecord};
pub use search::{
    default_shape, nearest_divisor, run_search, SearchConfig, SearchResult, Trace,
    DEFAULT_LAMBDA_MU_RATIO, DEFAULT_MAX_GENERATIONS,
};
