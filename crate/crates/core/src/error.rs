use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("{what} = {value} exceeds the limit of {limit}")]
    TooLarge { what: &'static str, value: usize, limit: usize },
    #[error("vertex {0} is not a cut vertex")]
    NotACutVertex(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no cut vertex")]
    NoCutVertex,
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("no value supplied for edge {0}-{1}")]
    MissingEdgeValue(usize, usize),
    #[error("zero value supplied for edge {0}-{1}")]
    ZeroValue(usize, usize),
    #[error("value supplied for non-edge {0}-{1}")]
    ExtraValue(usize, usize),
    #[error("matrix is not skew-symmetric over GF({0})")]
    NotSkew(u32),
    #[error("search space of {size} assignments exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("minimum skew rank of a subproblem could not be determined exactly")]
    Inexact,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("no matrix with the given support has rank {target} over GF({p})")]
    NotAchievable { target: usize, p: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid graph: {0}")]
    Validation(String),
    #[error("unknown campaign `{0}`")]
    UnknownCampaign(String),
}
