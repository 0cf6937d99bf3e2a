//! Digital straight segments on the integer grid.
//!
//! The crate covers the full path from generation to recognition:
//!
//! - [`geometry`] – lattice points, the chessboard (D8) metric, exact slopes,
//!   μ series and octant symmetries, on top of the exact [`rational`] type.
//! - [`gen`] – optimal rasterization `y = floor(m*x + 1/2)`, basic sets of
//!   rational slopes and tiling them into longer segments.
//! - [`bounds`] – how far the slope from a segment point to its successors may
//!   stray from the true slope, as exact checkable computations.
//! - [`chaincode`] – Freeman chain codes and the two-symbol / single-occurrence
//!   straightness properties.
//! - [`recognizer`] – segmentation of an 8-connected sequence by combining the
//!   chain properties with a running slope envelope.
//! - [`benchmark`] – the 811,800-case two-segment bank, effectiveness scoring
//!   and an independent exact straightness oracle.
//!
//! All comparisons on the recognition path are exact; floating point appears
//! only when rasterizing irrational benchmark slopes and in reports.

pub mod benchmark;
pub mod bounds;
pub mod chaincode;
pub mod error;
pub mod gen;
pub mod geometry;
pub mod io;
pub mod rational;
pub mod recognizer;

pub use error::{Error, ErrorClass, Result};
pub use geometry::{d8, GridPoint, SlopeValue};
pub use rational::Rational;
