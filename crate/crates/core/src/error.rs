use thiserror::Error;

use crate::hilbert::Role;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("subsystem `{0}` must have dimension >= 2")]
    InvalidDimension(String),

    #[error("amplitude vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("operator acts on dimension {got}, but its targets span dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("measurement basis is not orthonormal")]
    NonOrthonormalBasis,

    #[error("states are defined over different subsystems")]
    SubsystemMismatch,

    #[error("reduced density matrix requested over an empty subsystem set")]
    EmptyKeep,

    #[error("subsystem `{0}` is entangled with the rest of the state")]
    Entangled(String),

    #[error("subsystem `{label}` has role {found:?}, expected {expected:?}")]
    WrongRole {
        label: String,
        expected: Role,
        found: Role,
    },

    #[error("invalid cavity parameters: {0}")]
    InvalidCavity(String),

    #[error("reflection coefficient is undefined (0/0) for g = gamma = 0 at omega = omega_X")]
    SingularReflection,

    #[error("reflection amplitude {name} = {value} lies outside [0, 1]")]
    AmplitudeOutOfRange { name: &'static str, value: f64 },

    #[error("fidelity is undefined at zeta = xi = 0")]
    UndefinedFidelity,

    #[error("invalid sweep range: {0}")]
    InvalidRange(String),

    #[error("CSV error: {0}")]
    Csv(String),

    #[error("unknown Bell state `{0}` (expected phi+, phi-, psi+ or psi-)")]
    UnknownBellState(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
