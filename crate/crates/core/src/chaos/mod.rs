//! Wiener–Itô chaos expansions over a finite mode set.

mod json;
mod state;
mod wick;

pub use json::{ChaosJson, DegreeJson, EntryJson};
pub use state::{coefficients_from_s, BiTensor, ChaosFlavor, ChaosState, Coefficients, Extraction, FockVector, Product, VectorField};
pub use wick::*;
