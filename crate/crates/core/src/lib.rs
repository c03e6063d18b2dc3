//! Classification of weighted small-step walks confined to the quarter plane.
//!
//! A model is a 3×3 table of rational step weights. The crate builds the
//! kernel curve of the model, uniformizes it with the Weierstrass ℘-function,
//! studies the group generated by the two root-swapping involutions, and
//! combines the results into a verdict about the nature of the generating
//! function (algebraic, holonomic, or differentially transcendental).

pub mod classify;
pub mod curve;
pub mod error;
pub mod group;
pub mod kernel;
pub mod model;
pub mod poly;
pub mod proj;
pub mod rational;
pub mod report;
pub mod series;
pub mod uniformization;

pub use error::{Error, Result};
pub use kernel::KernelContext;
pub use model::WeightTable;
