use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("not a row contraction (norm {norm:.17})")]
    NotAContraction { norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("coupling does not factor through the defect operators (residual {residual:.3e})")]
    NotFactorable { residual: f64 },

    #[error("operator is not contractive (norm {norm:.17})")]
    NotContractive { norm: f64 },

    #[error("word of length {len} exceeds truncation {k}")]
    WordTooLong { len: usize, k: usize },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error(
        "product is not purely contractive (vacuum norm {vacuum_norm:.17}, F' dim {fprime_dim}, F*' dim {fstarprime_dim})"
    )]
    NotPurelyContractive {
        vacuum_norm: f64,
        fprime_dim: usize,
        fstarprime_dim: usize,
    },

    #[error("defect rank mismatch: expected {expected}, got {got}")]
    RankDeficiency { expected: usize, got: usize },

    #[error("tuple does not commute (commutator norm {commutator_norm:.3e})")]
    NotCommuting { commutator_norm: f64 },

    #[error("point lies outside the open unit ball (norm {norm:.17})")]
    OutsideBall { norm: f64 },

    #[error("series comparison needs sum |z_i| <= 1/2, got {l1_norm:.17}")]
    SamplingRestriction { l1_norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
