//! Numerical toolkit for classical communication over lossy bosonic channels
//! with coherent-state codes: linear-optical state algebra, Hadamard and
//! probabilistic pulse-position codebooks, analytic detector statistics,
//! information rates, and a seeded Monte Carlo receiver simulation.

pub mod codebook;
pub mod detectors;
pub mod error;
pub mod optics;
pub mod quad;
pub mod rates;
pub mod sim;
pub mod util;

pub use error::{Error, Result};
