//! Front end for the jet-space zero-curvature engine.
//!
//! A problem is a single JSON document naming an equation system, a matrix
//! Lie algebra, and whatever objects the requested command needs (a ZCR
//! candidate pair, a gauge matrix, characteristics, cosymmetry candidates,
//! a conserved-current pair, or a residual decomposition). Commands map
//! one-to-one onto engine operations and emit deterministic reports in text
//! or JSON form.

pub mod problem;
pub mod report;
pub mod run;

pub use problem::{load_problem, parse_problem, InputError, Problem};
pub use report::{Format, Report};
pub use run::{run, Command, RunOptions};
