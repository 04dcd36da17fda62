//! Exact operator-norm constants for the uncentered Hardy-Littlewood maximal
//! function on the line, verified empirically on piecewise-constant test
//! functions.
//!
//! The crate computes the sharp L^p bound as the unique positive root of its
//! defining polynomial, cross-checks it through an independent optimal-window
//! route, and backs it with machinery that is exact on step functions: fast
//! one-sided maximal operators with an O(m^2) oracle, sunrise-style level
//! sets whose endpoints solve linear equations, layer-cake identities by slab
//! decomposition, the truncated power profiles that approach the sharp
//! constant, the separable strong maximal function whose norm is the n-th
//! power of the 1D constant, and the log-domain lower bound showing the ball
//! maximal operator's norm grows exponentially with dimension.

pub mod best_constant;
pub mod error;
pub mod extremal;
pub mod fmt;
pub mod high_dim;
pub mod layer_cake;
pub mod maximal_1d;
pub mod quadrature;
pub mod random;
pub mod step_fn;
pub mod strong_max;

pub use error::{Error, Result};
pub use step_fn::{IntervalSet, PNormParams, StepFunction};
