//! Radial probability densities of a particle in an infinite spherical well,
//! classical and quantum, and their comparison at large quantum numbers.
//!
//! All quantities are dimensionless: the well radius, `ħ`, the particle
//! mass and (classically) the speed are set to 1.

pub mod classical;
pub mod cli;
pub mod numerics;
pub mod quantum;
pub mod specfun;
