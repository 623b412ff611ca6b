// Validation uses `!(x > 0.0)` throughout: unlike `x <= 0.0` it also
// rejects NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerics for the Ornstein-Uhlenbeck-type risk model driven by a
//! subordinator: absolute ruin probabilities in finite and infinite time,
//! the spectral series expansion of the dual semigroup, q-scale functions
//! and two-sided exit functionals, closed-form reference oracles and a
//! Monte Carlo path simulator.
//!
//! The surplus process solves dX = (rX + c) dt - dZ with Z a driftless
//! subordinator; absolute ruin is the first passage below -c/r, after which
//! interest payments dominate the premium and recovery is impossible.

pub mod backward;
pub mod error;
pub mod levy;
pub mod mc;
pub mod oracles;
pub mod quad;
pub mod ruin;
pub mod scale;
pub mod special;
pub mod spectral;
pub mod transform;

pub use backward::BackwardExponent;
pub use error::{Error, Result};
pub use levy::{LevyModel, NuMoment, ProcessParams};
pub use mc::{MCEstimate, SimConfig};
pub use ruin::{Horizon, InversionConfig, RuinQuery};
pub use scale::ScaleFunction;
pub use special::SeriesControl;
pub use spectral::{SpectralSeries, TruncationErrorReport};
pub use transform::{CumulativeRule, GridOptions, GridSpec, WFamily};
