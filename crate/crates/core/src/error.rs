use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("trace {0} differs from 1")]
    InvalidTrace(f64),
    #[error("Bloch vector of length {0} lies outside the unit ball")]
    BlochOutOfBall(f64),
    #[error("index {index} out of range 1..={max}")]
    BadIndex { index: usize, max: usize },
    #[error("{0} qubits requested, at most 4 supported")]
    TooManyQubits(usize),
    #[error("decoherence rate has a pole at t = {t}")]
    RatePole { t: f64 },
    #[error("averaged generator norm vanishes while the numerator is {numerator:.3e}")]
    DegenerateDenominator { numerator: f64 },
    #[error("mixed-state factor is singular at t = {t} (evolved state is pure)")]
    MixedFactorSingular { t: f64 },
    #[error("negative radicand {value:.3e} at t = {t}")]
    ComplexRadicand { t: f64, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
