//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} index {index} out of range (dimension {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("operands live on different register layouts")]
    LayoutMismatch,

    #[error("non-finite value encountered in {what}")]
    NonFinite { what: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state has no nuclear register")]
    NoNuclearRegister,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension {dim} exceeds dense-diagonalization cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("ground state is degenerate within the gap floor (gap {gap:.3e})")]
    DegenerateSpectrum { gap: f64 },

    #[error("cannot construct schedule: {0}")]
    ScheduleConstruction(String),

    #[error("orbitals are not orthonormal (max deviation {deviation:.3e})")]
    NonOrthonormalOrbitals { deviation: f64 },

    #[error("amplitudes became non-finite or non-unitary at step {step}")]
    NumericalOverflow { step: usize },

    #[error("state file is malformed: {0}")]
    MalformedStateFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
