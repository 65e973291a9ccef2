//! Exact-rational computations on negative definite plumbing graphs:
//! weight vectors, toric model neighborhoods, horizontal open books, and
//! classification against the hypotheses under which the neighborhood
//! can be replaced symplectically.
//!
//! Areas are carried in units of 2*pi throughout, so every identity the
//! construction rests on (weight solve, offset sums, collar rectangles,
//! binding counts) is checked with zero tolerance.

pub mod classify;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod model;
pub mod obd;
pub mod rat;
pub mod rng;
pub mod svg;

pub use error::{Error, Result};
