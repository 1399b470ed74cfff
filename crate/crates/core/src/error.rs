//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Roller displacement at or beyond the rod length: the rods lock.
    #[error("displacement {y} outside working range |Y| < {rod_length} (mechanism locked)")]
    LockedRange { y: f64, rod_length: f64 },

    #[error("spring model is not linear: half gap B = {half_gap} is nonzero")]
    NotLinear { half_gap: f64 },

    #[error("net linear stiffness is zero; the inverse problem divides by K_GSM")]
    ZeroStiffness,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("non-integer exponent at byte {offset}: only integer powers of X are supported")]
    NonIntegerExponent { offset: usize },

    #[error("x = {x} outside sampled table range [{lo}, {hi}]")]
    OutOfTable { x: f64, lo: f64, hi: f64 },

    #[error("adaptive quadrature exceeded depth {max_depth} on [{a}, {b}] without meeting tolerance")]
    QuadratureFailure { a: f64, b: f64, max_depth: u32 },

    #[error("x = {x} outside domain ({lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("track height |Y({x})| below boundary tolerance; slope is singular there")]
    RootSingularity { x: f64 },

    #[error("branch domain is empty after shrinking by the boundary tolerance")]
    EmptyDomain,

    #[error("sample Y = {y} reaches the travel limit {limit}")]
    TravelExceeded { y: f64, limit: f64 },

    #[error("sample X values not strictly increasing at index {index}")]
    NonMonotoneX { index: usize },

    #[error("invalid initial state: {0}")]
    InvalidInitialState(String),

    #[error("trajectories share no common time span")]
    NoOverlap,

    #[error("search window too small: no sample point lies inside")]
    SearchWindowEmpty,

    #[error("force evaluated to a non-finite value at x = {x}")]
    NonFiniteForce { x: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
