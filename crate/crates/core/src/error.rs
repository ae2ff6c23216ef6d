use thiserror::Error;

/// Errors raised by the numerical laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error(
        "curve self-intersects near ({x:.6}, {y:.6}) between parameter values {t1:.6} and {t2:.6}"
    )]
    SelfIntersection { x: f64, y: f64, t1: f64, t2: f64 },

    #[error("curve speed vanishes (|z'| = {speed:.3e}) at t = {t:.6}")]
    VanishingSpeed { t: f64, speed: f64 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("root bracketing failed for order {order} ({kind}) in scan range [{lo}, {hi}]")]
    Bracketing {
        order: u32,
        kind: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("grid mismatch: expected {expected} samples, got {got}")]
    GridMismatch { expected: usize, got: usize },

    #[error("domain is not star-shaped with respect to anchor ({x:.6}, {y:.6})")]
    NotStarShaped { x: f64, y: f64 },

    #[error("point ({x:.6}, {y:.6}) lies outside the domain")]
    ExteriorPoint { x: f64, y: f64 },

    #[error("curve is not strictly convex (kappa = {kappa:.3e} at s = {s:.6}); kappa = -dtheta/ds < 0 is required")]
    NotConvex { s: f64, kappa: f64 },

    #[error("curve is not centrally symmetric (defect {defect:.3e})")]
    NotCentrallySymmetric { defect: f64 },

    #[error("subspace basis is linearly dependent: member '{member}' (smallest singular value {sigma:.3e})")]
    LinearDependence { member: String, sigma: f64 },

    #[error("sampled field: {0}")]
    Field(String),

    #[error("eigensolver: {0}")]
    Solver(String),

    #[error("config: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
