//! Skew-symmetric matrices over prime fields and exhaustive rank search.

mod field;
mod matrix;
mod oracle;

pub use field::PrimeField;
pub use matrix::{matrix_from_assignment, random_skew_matrix, rank_skew, RankWitness, SkewMatrix};
pub use oracle::{
    find_rank, max_rank_exhaustive, max_rank_sample, min_rank_exhaustive, min_rank_partitioned, min_rank_with,
    search_space, Normalization, SearchOptions, DEFAULT_BUDGET,
};
