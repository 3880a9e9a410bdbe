//! Grids, density curves, quadrature, seeded random streams and histograms.

mod grid;
mod histogram;
mod quadrature;
mod rng;

pub use grid::{curve_distance, DensityCurve, Metric, RadialGrid};
pub use histogram::{accumulate_histogram, Histogram};
pub use quadrature::{integrate, integrate_singular, EndpointSingularity, GaussLegendre};
pub use rng::{seeded_rng, SeededRng};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid density curve: {0}")]
    InvalidCurve(String),
    #[error("curves are defined on different grids")]
    GridMismatch,
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("quadrature did not converge on [{a}, {b}] (tolerance {tol})")]
    NoConvergence { a: f64, b: f64, tol: f64 },
    #[error("invalid histogram edges: {0}")]
    InvalidEdges(String),
    #[error("no samples to accumulate")]
    EmptySamples,
}

pub type Result<T> = std::result::Result<T, NumericsError>;
