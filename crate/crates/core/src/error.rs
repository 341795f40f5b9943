// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma function pole at z = {0}")]
    GammaPole(f64),

    #[error("hypergeometric lower parameter {0} is a non-positive integer")]
    HypergeometricPole(f64),

    #[error("{function} series did not converge within {terms} terms")]
    NonConvergence { function: &'static str, terms: usize },

    #[error("bath integral I_Q evaluated to {value} < 0 (Q = {ohmicity}, t = {t})")]
    NegativeBathIntegral { value: f64, ohmicity: f64, t: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("expected a rank-1 projector, purity is {0}")]
    NotPure(f64),

    #[error("state is not an X state (max forbidden entry {0:e})")]
    NotXState(f64),

    #[error("matrix is not block diagonal for the given blocks (max off-block entry {0:e})")]
    NotBlockDiagonal(f64),

    #[error("singular SLD block: det = {det:e} with xi = {xi:e}")]
    SingularBlock { det: f64, xi: f64 },

    #[error("degenerate estimation point: alpha = 1 with dalpha/dB1 = {0:e}")]
    DegeneratePoint(f64),

    #[error("optimal measurement undefined: sin(theta) sin(vartheta) = 0")]
    SingularMeasurement,

    #[error("outcome {index} has probability {p:e} but derivative {dp:e}")]
    SingularProbability { index: usize, p: f64, dp: f64 },

    #[error("unknown figure '{0}'")]
    UnknownFigure(String),

    #[error("config error at line {line}, field '{field}': {message}")]
    Config {
        line: usize,
        field: String,
        message: String,
    },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
