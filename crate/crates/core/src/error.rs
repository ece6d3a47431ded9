use thiserror::Error;

/// Errors raised by the exact algebra, the decision procedures and the
/// witness builder.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("generator {index} is not unimodular (determinant {det})")]
    GeneratorNotUnimodular { index: usize, det: String },

    #[error("degenerate action: {0}")]
    Degenerate(&'static str),

    #[error("source and target actions have different ranks ({source_rank} vs {target_rank})")]
    RankMismatch {
        source_rank: usize,
        target_rank: usize,
    },

    #[error("factor matrix is not equivariant for generator {0}")]
    NotEquivariant(usize),

    #[error("factor matrix does not induce a surjection (rank {rank} < {target_dim})")]
    NotSurjective { rank: usize, target_dim: usize },

    #[error("the finite-orbit character lattice is trivial")]
    EmptyF,

    #[error("could not separate circle values (best minimum gap {min_gap:e})")]
    SeparationFailure { min_gap: f64 },

    #[error("decision report does not assert existence of a non-affine map")]
    NotNonaffine,

    #[error("invalid decision report: {0}")]
    InvalidReport(String),
}

pub type Result<T> = std::result::Result<T, Error>;
