//! Exact minimum and maximum skew rank of small simple graphs over prime
//! fields of odd characteristic.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: the [`Graph`] type, structural queries (components, cut
//!   vertices, blocks), class recognizers and the edge-list file format.
//! * [`linalg`]: arithmetic in GF(p), skew-symmetric matrices with a
//!   prescribed support, exact rank, and the exhaustive rank oracle.
//! * [`combinat`]: maximum matchings, perfect-matching counts and zero
//!   forcing.
//! * [`engine`]: the rule-based solver combining the structural formulas into
//!   an exact value or a pair of bounds, with a replayable trace.
//! * [`campaign`]: verification campaigns that compare each structural rule
//!   against the oracle over enumerated graph families.

pub mod campaign;
pub mod combinat;
pub mod engine;
mod error;
pub mod graph;
pub mod linalg;

pub use combinat::{ColoringState, Matching};
pub use engine::{Engine, FieldSpec, Mr4Classification, Mr4Verdict, RankResult, Rule, TraceStep};
pub use error::{Error, Result};
pub use graph::{BranchDecomposition, Graph, KPathLabeling, Partition};
pub use linalg::{PrimeField, RankWitness, SearchOptions, SkewMatrix};
