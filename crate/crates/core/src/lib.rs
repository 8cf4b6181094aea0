//! Mean-oscillation norms over quasi-Banach function spaces, computed exactly on
//! dyadic grids.
//!
//! Functions live on the unit cube `[0,1)^n` (`n` is 1 or 2) as piecewise
//! constants on a dyadic grid. Every supremum over cubes becomes a maximum
//! over the finite family of grid-aligned cubes, so BMO and Campanato norms,
//! their function-space variants, the Hardy–Littlewood maximal operator and
//! the sparse Calderón–Zygmund decomposition are all evaluated by finite sums.
//!
//! Module map:
//!
//! * [`grid`]: grids, cubes, grid functions, averages, dilations.
//! * [`spaces`]: quasi-norms of Lebesgue, weighted, Lorentz, Orlicz,
//!   variable-exponent and Morrey spaces; associate norms of indicators.
//! * [`maximal`]: maximal operator and its boundedness probes.
//! * [`sparse`]: sparse families from a stopping-time decomposition.
//! * [`oscillation`]: BMO, Campanato and space-based oscillation functionals.
//! * [`conditions`]: checkers for weight, Young-function and `φ` hypotheses.
//! * [`corpus`]: deterministic test functions, weights and exponents.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conditions;
pub mod corpus;
pub mod error;
pub mod grid;
pub mod maximal;
pub mod oscillation;
pub mod sparse;
pub mod spaces;
pub mod sum;

pub use conditions::{ConditionReport, PhiParameter, Witness};
pub use error::{Error, Result};
pub use grid::{Cube, DyadicGrid, GridFunction};
pub use maximal::MaximalMode;
pub use oscillation::{CubeRecord, IndicatorNorms, OscillationProfile, OscillationReport};
pub use sparse::SparseFamily;
pub use spaces::{SpaceSpec, VariableExponent, Weight, YoungFunction};

/// Formats a float with the shortest representation that parses back to the same bits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Crate version, recorded in report provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
