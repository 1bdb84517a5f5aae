//! MaxCut toolkit for low-depth variational ansatzes.
//!
//! * [`graph`]: weighted graphs, neighbourhood decomposition, regular-graph
//!   generation, file I/O and an exhaustive MaxCut oracle.
//! * [`analytic`]: closed-form p=1 expectations for QAOA, MA-QAOA and the
//!   XQAOA mixer family (XY, X=Y, Y).
//! * [`simulator`]: dense statevector construction for any depth, used as an
//!   oracle and for the p > 1 study.
//! * [`optimize`]: L-BFGS with central-difference or exact gradients, and
//!   multistart.
//! * [`baselines`]: Classical-Relaxed, Goemans-Williamson and cut extraction
//!   from converged X=Y angles.
//! * [`bench`]: campaign harness producing CSV/JSON records.

pub mod analytic;
pub mod baselines;
pub mod bench;
pub mod error;
pub mod graph;
pub mod optimize;
pub mod rng;
pub mod simulator;

pub use error::{Error, Result};
pub use graph::{CutResult, Graph};
