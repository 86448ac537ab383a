//! Planted dense subgraph detection experiments.
//!
//! The crate is organised bottom-up:
//!
//! * [`randkit`]: seedable sampling and exact finite PMF arithmetic.
//! * [`graphs`]: graph types, planted-model generators and edge-list I/O.
//! * [`detectors`]: linear / scan / DKS / recovery based tests and Monte Carlo
//!   error estimation.
//! * [`reduction`]: the randomized planted clique to planted dense subgraph
//!   reduction, including the exact edge-count kernel.
//! * [`checks`]: exact enumeration checks of the kernel identities and the
//!   supporting probability inequalities.
//! * [`phase`]: phase-diagram sweeps with CSV and SVG output.

pub mod checks;
pub mod detectors;
pub mod error;
pub mod graphs;
pub mod phase;
pub mod randkit;
pub mod reduction;

pub use detectors::{Decision, ErrorEstimate, ScanMode, TestOutcome};
pub use error::{Error, Result};
pub use graphs::{BipartiteGraph, BipartiteInstance, Graph, PdsParams, PlantedInstance};
pub use randkit::{Pmf, Seed};
pub use reduction::{ReductionParams, Reducer};
