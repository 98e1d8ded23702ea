use thiserror::Error;

use crate::plane::Point;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} must be positive")]
    NonPositiveParameter(&'static str),

    #[error("invalid point ({x}, {y}): coordinates must be finite and nonnegative")]
    InvalidPoint { x: f64, y: f64 },

    #[error("map undefined at ({}, {}): zero denominator", .at.x, .at.y)]
    ZeroDenominator { at: Point },

    #[error("map image of ({}, {}) is not finite", .at.x, .at.y)]
    NonFinite { at: Point },

    #[error("no interior saddle for these parameters")]
    NoInteriorSaddle,

    #[error("epsilon {0} yields a degenerate trapping rectangle")]
    InvalidEpsilon(f64),

    #[error("equilibrium index {index} out of range ({count} equilibria)")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("bisection failed at x = {x}: {reason}")]
    BisectionFailed { x: f64, reason: &'static str },

    #[error("image x = {x} leaves the curve window [{lo}, {hi}]")]
    ImageOutOfRange { x: f64, lo: f64, hi: f64 },

    #[error("not enough samples near the saddle for a tangency check")]
    InsufficientSamples,

    #[error("probe ({x}, {y}) is not on the curve (offset {offset})")]
    NotOnCurve { x: f64, y: f64, offset: f64 },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("unknown case list `{0}`")]
    UnknownList(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
