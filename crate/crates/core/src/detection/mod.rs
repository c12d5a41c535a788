//! SDP hypothesis tests for hidden communities, and the split / solve /
//! threshold estimator.
//!
//! The test statistic of a graph `G` with average degree `d` is
//!
//! ```text
//! T(G) = OPT_k(A_G − (d/n) 11ᵀ) / (n √d)
//! ```
//!
//! and the test declares structure when `T(G) ≥ 2(1 + δ)`. Since `OPT_k` is a
//! certified lower bound on the SDP value, a positive decision is never
//! caused by solver slack.

mod estimate;

pub use estimate::{
    estimate_partition, factor_eigvectors, overlap, select_candidate, split_edges, split_probability,
    threshold_family, Candidate, EstimateOptions, EstimateResult,
};

use serde::{Deserialize, Serialize};

use crate::graph::{CenteredOperator, SparseGraph};
use crate::rng::derive_seed;
use crate::solver::{opt_k, sdp_sandwich, SolverParams};
use crate::{Error, Result};

/// `2|E| / n`; zero for the empty graph.
pub fn estimate_d(g: &SparseGraph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    2.0 * g.num_edges() as f64 / g.n() as f64
}

/// Where the average degree used by the test comes from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum DegreeSpec {
    /// A known value.
    Known(f64),
    /// `(a + (r−1) b) / r` for an `r`-community planted partition.
    Planted { r: usize, a: f64, b: f64 },
    /// [`estimate_d`] of the graph under test.
    #[default]
    Estimated,
}

impl DegreeSpec {
    pub fn resolve(&self, g: &SparseGraph) -> Result<f64> {
        let d = match *self {
            DegreeSpec::Known(d) => d,
            DegreeSpec::Planted { r, a, b } => {
                if r == 0 {
                    return Err(Error::invalid("r must be >= 1"));
                }
                (a + (r as f64 - 1.0) * b) / r as f64
            }
            DegreeSpec::Estimated => estimate_d(g),
        };
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::invalid(format!("average degree must be > 0, got {d}")));
        }
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestOptions {
    pub delta: f64,
    pub solver: SolverParams,
    /// Also solve `-A^cen` and report the sandwich upper bound on `SDP/(n√d)`.
    pub report_upper: bool,
}

impl Default for TestOptions {
    fn default() -> Self {
        TestOptions {
            delta: 0.05,
            solver: SolverParams::default(),
            report_upper: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub threshold: f64,
    pub decision: bool,
    pub d_used: f64,
    pub k_used: usize,
    /// Upper bound on `SDP(A^cen)/(n√d)`, when requested.
    pub upper: Option<f64>,
}

/// Test for two hidden communities.
///
/// `A^cen` is solved at rank `opts.solver.resolved_rank(n)` with seed
/// `derive_seed(seed, 0)`, whether or not the upper bound is requested.
pub fn test_two_communities(g: &SparseGraph, degree: DegreeSpec, opts: &TestOptions, seed: u64) -> Result<TestResult> {
    let d = degree.resolve(g)?;
    if !(opts.delta > -1.0) {
        return Err(Error::invalid(format!("delta must be > -1, got {}", opts.delta)));
    }
    let n = g.n();
    let k = opts.solver.resolved_rank(n);
    let op = CenteredOperator::normalized(g, d)?;
    let norm = n as f64;
    let (lower, upper) = if opts.report_upper {
        let s = sdp_sandwich(&op, k, &opts.solver, seed, None)?;
        (s.lower, Some(s.upper / norm))
    } else {
        (opt_k(&op, k, &opts.solver, derive_seed(seed, 0))?.value, None)
    };
    let statistic = lower / norm;
    let threshold = 2.0 * (1.0 + opts.delta);
    Ok(TestResult {
        statistic,
        threshold,
        decision: statistic >= threshold,
        d_used: d,
        k_used: k,
        upper,
    })
}

/// Test for `r` hidden communities.
///
/// The statistic is the same as for two communities; `r` only enters through
/// the average degree `(a + (r−1) b) / r` when `ab` is given. An explicit
/// `d` in `degree` takes precedence.
pub fn test_r_communities(
    g: &SparseGraph,
    r: usize,
    ab: Option<(f64, f64)>,
    degree: Option<f64>,
    opts: &TestOptions,
    seed: u64,
) -> Result<TestResult> {
    let spec = match (degree, ab) {
        (Some(d), _) => DegreeSpec::Known(d),
        (None, Some((a, b))) => DegreeSpec::Planted { r, a, b },
        (None, None) => DegreeSpec::Estimated,
    };
    test_two_communities(g, spec, opts, seed)
}

/// `δ` with `2(1 + δ) = max(null) + margin`.
///
/// Fails on fewer than two statistics, non-finite values, a negative margin
/// or a null sample with zero spread.
pub fn calibrate_delta(null_statistics: &[f64], margin: f64) -> Result<f64> {
    if null_statistics.len() < 2 {
        return Err(Error::invalid("calibration needs at least two null statistics"));
    }
    if !(margin >= 0.0 && margin.is_finite()) {
        return Err(Error::invalid(format!("margin must be finite and >= 0, got {margin}")));
    }
    if let Some(bad) = null_statistics.iter().find(|s| !s.is_finite()) {
        return Err(Error::NumericalFailure(format!("non-finite null statistic {bad}")));
    }
    let max = null_statistics.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = null_statistics.iter().copied().fold(f64::INFINITY, f64::min);
    if max == min {
        return Err(Error::NumericalFailure(format!("null statistics have zero spread (all {max})")));
    }
    Ok((max + margin) / 2.0 - 1.0)
}
