use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("pair {{{0}, {1}}} has no arc")]
    MissingPair(usize, usize),
    #[error("pair {{{0}, {1}}} is oriented both ways")]
    DoubleOrientation(usize, usize),
    #[error("roots must be distinct, got ({0}, {1})")]
    EqualRoots(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("host digraph has no vertices")]
    EmptyHost,
    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("enumeration cap of {cap} homomorphisms reached")]
    CapHit { cap: usize },
    #[error("no sample satisfied every condition after {tries} tries ({detail})")]
    SamplingFailed { tries: usize, detail: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
