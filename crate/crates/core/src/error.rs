use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("subspace is not invariant under arrow `{arrow}` (residual {residual:.3e} > {tolerance:.3e})")]
    NotInvariant { arrow: String, residual: f64, tolerance: f64 },
    #[error("inclusion matrix at vertex `{vertex}` is rank deficient (rank {rank} < {cols})")]
    RankDeficient { vertex: String, rank: usize, cols: usize },
    #[error("operation requires a nonzero representation")]
    ZeroRepresentation,
    #[error("{unknowns} intertwiner unknowns exceed the size limit {limit}")]
    SizeLimit { unknowns: usize, limit: usize },
    #[error("quiver has self-loops at vertex `{0}`; apply remove_loops first")]
    SelfLoop(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 3,
            Error::SizeLimit { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
