//! Gaussian chaos, Wick calculus and Kähler quantization on finite-dimensional
//! field spaces, with a per-mode cosmological evolution driver.

pub mod chaos;
pub mod cli;
pub mod cosmo;
pub mod diagrams;
pub mod error;
pub mod gaussian;
pub mod kahler;
pub mod poly;
pub mod quantize;
pub mod scalar;
pub mod symtensor;
pub mod transforms;

pub use error::{Error, Result};
