//! Elliptope SDP machinery for sparse random graphs.
//!
//! The crate is organised around the objects it manipulates:
//!
//! * [`graph`]: random graph ensembles (Erdős–Rényi, planted partitions,
//!   random regular) and the implicit centered adjacency operator.
//! * [`matrix`]: dense symmetric matrices, GOE / deformed-GOE sampling and a
//!   Householder + implicit QL eigensolver.
//! * [`solver`]: the rank-k factorized solver for
//!   `max <M, X>` over `X ⪰ 0, diag(X) = 1`, Grothendieck-type value
//!   certificates and randomized rounding.
//! * [`detection`]: SDP hypothesis tests and the split / solve / threshold
//!   estimator for hidden communities.
//! * [`witness`]: explicit feasible points certifying lower bounds on the SDP
//!   value of deformed GOE matrices.
//! * [`experiments`]: the config-driven, seed-reproducible experiment harness
//!   used by the CLI.
//!
//! Data-parallel loops (restarts, Monte Carlo trials, grid searches) go
//! through [`par`], which uses rayon when the `parallel` feature is enabled
//! and falls back to plain iteration otherwise.

// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod matrix;
pub mod par;
pub mod rng;
pub mod solver;
pub mod witness;

pub use error::{Error, Result};
