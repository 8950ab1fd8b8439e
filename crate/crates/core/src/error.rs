use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node singularity: x = {x} is a node of the grid with n = {n}")]
    NodeSingularity { n: usize, x: f64 },

    #[error("the grid needs at least one interval (n = 0)")]
    EmptyGrid,

    #[error("x = {0} is outside the open interval (-1, 1)")]
    OutOfDomain(f64),

    #[error("invalid rational point {num}/{den}: {reason}")]
    InvalidRational { num: i64, den: i64, reason: &'static str },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("model `{model}` lacks required metadata: {what}")]
    MissingMetadata { model: String, what: &'static str },

    #[error("m = {0} is not a valid sawtooth size (need m = (4r)^2 with r >= 2)")]
    InvalidSawtooth(u64),

    #[error("integer overflow: {0}")]
    Overflow(&'static str),
}
