//! Resummation toolkit for the imaginary cubic oscillator
//! `H = -½∂² + ½x² + i√g x³/6`.
//!
//! The crate generates the exact weak-coupling series, sums it with
//! order-dependent conformal mappings and continued fractions, and extracts
//! the convergent strong-coupling expansion in `χ = g^{-4/5}` together with
//! the level-merging point of the two lowest levels.

pub mod cli;
pub mod contfrac;
pub mod error;
pub mod number;
pub mod odm;
pub mod pade;
pub mod perturbation;
pub mod roots;
pub mod series;
pub mod strong;

pub use error::{Error, Result};
pub use number::{BigComplex, Precision};
