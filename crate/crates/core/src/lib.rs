//! Fixed points of `(a, F)`-contractions: Wardowski functions, derived
//! comparison functions, Picard iteration with certificates, and checkers for
//! the contraction conditions on finite and sampled domains.
//!
//! ```
//! use wardowski::metric_space::RealLine;
//! use wardowski::solver::{picard_iterate, PicardConfig, RunStatus, SelfMap};
//!
//! let half = SelfMap::new("x/2", RealLine, |x: &f64| x / 2.0);
//! let run = picard_iterate(&half, 1.0, &PicardConfig::new(1e-9, 100));
//! assert!(matches!(run.status, RunStatus::Converged { .. }));
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparison;
pub mod metric_space;
pub mod numerics;
pub mod par;
pub mod solver;
pub mod verifier;
pub mod wardowski;

pub use comparison::{derive_phi, ComparisonFunction};
pub use metric_space::{FiniteMetricSpace, MetricSpace, SequenceTrace};
pub use numerics::{ExtReal, Tolerance};
pub use par::Execution;
pub use solver::{picard_iterate, PicardConfig, PicardRun, SelfMap};
pub use wardowski::{Family, WardowskiFunction};
