use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("levels must be positive (got N = {n}, M = {m})")]
    NonPositiveLevel { n: u32, m: u32 },

    #[error("the frame algorithm requires M = N (got M = {m}, N = {n})")]
    UnequalLevels { m: u32, n: u32 },

    #[error("digit {digit} at index {index} is not in [0, {p})")]
    DigitOutOfRange { index: i32, digit: u32, p: u32 },

    #[error("mismatched primes {0} and {1}")]
    PrimeMismatch(u32, u32),

    #[error("node {node} is outside the tree (size {size})")]
    NodeOutOfRange { node: usize, size: usize },

    #[error("transform rejected at node {node}: {reason}")]
    TransformRejected { node: usize, reason: &'static str },

    #[error(
        "tree has a zero-free path ending at leaf {leaf}; phi-hat would not vanish on the top annulus"
    )]
    ZeroFreePath { leaf: usize },

    #[error("tree is infeasible: {zeros} zeros, at most {limit} allowed; the zero values force lambda_0 = 0")]
    Infeasible { zeros: usize, limit: usize },

    #[error("tree is short of {deficit} zeros; pad it before solving")]
    NeedsPadding { deficit: usize },

    #[error("padding needs {needed} extra zeros but only {available} nodes are available")]
    PaddingExhausted { needed: usize, available: usize },

    #[error("node {node} has no concrete value")]
    Unsolved { node: usize },

    #[error("computed |lambda_{node}| = {magnitude:e} is below tolerance for a nonzero node")]
    Contradiction { node: usize, magnitude: f64 },

    #[error("refinement level {requested} is coarser than current level {current}")]
    CoarserLevel { requested: i32, current: i32 },

    #[error("window of {digits} base-{p} digits is too large")]
    WindowTooLarge { p: u32, digits: u32 },

    #[error("level {level} of the shifted tree contains a zero")]
    ZeroOnLevel { level: u32 },

    #[error("shifted tree contains no zero")]
    NoZeroLevel,

    #[error("branch does not apply: {0}")]
    BranchMismatch(String),

    #[error("invalid J-partition: {0}")]
    InvalidPartition(String),

    #[error("{0}")]
    Parse(String),
}
