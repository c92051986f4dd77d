//! Matchings and zero forcing.

mod forcing;
mod matching;

pub use forcing::{forcing_closure, zero_forcing_number, ColoringState, MAX_ZERO_FORCING_ORDER};
pub use matching::{count_perfect_matchings, matching_number, Matching, MAX_MATCHING_ORDER};
