use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{init_factor, objective, SphereFactor, SymOperator};
use crate::matrix::dot;
use crate::par::{self, Parallelism};
use crate::rng::{derive_seed, rng_from_seed};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AscentParams {
    /// Stop once an epoch gains less than `tol · (1 + |objective|)`.
    pub tol: f64,
    pub max_epochs: usize,
}

impl Default for AscentParams {
    fn default() -> Self {
        AscentParams {
            tol: 1e-7,
            max_epochs: 1000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverParams {
    /// Factor rank; `None` selects [`default_rank`].
    pub rank: Option<usize>,
    pub restarts: usize,
    pub ascent: AscentParams,
    pub parallelism: Parallelism,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            rank: None,
            restarts: 3,
            ascent: AscentParams::default(),
            parallelism: Parallelism::Sequential,
        }
    }
}

impl SolverParams {
    pub fn resolved_rank(&self, n: usize) -> usize {
        self.rank.unwrap_or_else(|| default_rank(n))
    }
}

/// `⌈√(2n)⌉`, capped at 64.
pub fn default_rank(n: usize) -> usize {
    ((2.0 * n as f64).sqrt().ceil() as usize).clamp(1, 64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    /// Objective before the first epoch, then after each epoch.
    pub objective_trace: Vec<f64>,
    pub epochs: usize,
    pub converged: bool,
    pub restarts_used: usize,
}

#[derive(Clone, Debug)]
pub struct OptResult {
    /// `Σ_ij M_ij <σ_i, σ_j>` of `factor`, recomputed exactly.
    pub value: f64,
    pub factor: SphereFactor,
    pub report: SolveReport,
}

/// Block-coordinate ascent on `Σ_ij M_ij <σ_i, σ_j>`.
///
/// Each update replaces `σ_i` with `h_i / ‖h_i‖`, `h_i = Σ_{j≠i} M_ij σ_j`,
/// the exact maximizer over row `i`. Rows with a zero field are left alone.
/// Each epoch sweeps the rows in a fresh random order drawn from `seed`.
pub fn coordinate_ascent<O: SymOperator + ?Sized>(
    op: &O,
    factor: SphereFactor,
    params: &AscentParams,
    seed: u64,
) -> Result<(SphereFactor, SolveReport)> {
    let n = op.dim();
    if factor.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: factor.n(),
        });
    }
    if !(params.tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be > 0, got {}", params.tol)));
    }
    let k = factor.k();
    let mut f = factor;
    let mut rng = rng_from_seed(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut h = vec![0.0; k];
    let mut old = vec![0.0; k];

    let mut value = objective(op, &f)?;
    let mut trace = vec![value];
    let mut converged = false;
    let mut epochs = 0;

    while epochs < params.max_epochs {
        epochs += 1;
        let start = value;
        let mut cache = op.init_cache(&f);
        order.shuffle(&mut rng);
        for &i in &order {
            op.field(&cache, &f, i, &mut h);
            let norm = dot(&h, &h).sqrt();
            if !(norm > 0.0) {
                continue;
            }
            let row = f.row_mut(i);
            let gain = 2.0 * (norm - dot(row, &h));
            debug_assert!(gain >= -1e-9 * (1.0 + norm), "ascent step lost {gain}");
            if !(gain > 0.0) {
                continue;
            }
            old.copy_from_slice(row);
            for (r, &hv) in row.iter_mut().zip(&h) {
                *r = hv / norm;
            }
            op.row_updated(&mut cache, i, &old, f.row(i));
            value += gain;
        }
        trace.push(value);
        if value - start < params.tol * (1.0 + value.abs()) {
            converged = true;
            break;
        }
    }
    Ok((
        f,
        SolveReport {
            objective_trace: trace,
            epochs,
            converged,
            restarts_used: 1,
        },
    ))
}

/// Best of `params.restarts` independent ascents from random rank-`k` starts.
///
/// Restart `r` initializes from `derive_seed(seed, 2r)` and sweeps with
/// `derive_seed(seed, 2r + 1)`. Ties go to the lowest restart index, so the
/// result does not depend on `params.parallelism`.
pub fn opt_k<O: SymOperator + ?Sized>(op: &O, k: usize, params: &SolverParams, seed: u64) -> Result<OptResult> {
    if params.restarts == 0 {
        return Err(Error::invalid("need at least one restart"));
    }
    let n = op.dim();
    let runs = par::map_indexed(params.restarts, params.parallelism, |r| {
        let r = r as u64;
        let start = init_factor(n, k, derive_seed(seed, 2 * r))?;
        opt_k_from(op, start, &params.ascent, derive_seed(seed, 2 * r + 1))
    });
    let mut best: Option<OptResult> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let mut best = best.expect("at least one restart");
    best.report.restarts_used = params.restarts;
    Ok(best)
}

/// Single ascent from a given (warm) start.
pub fn opt_k_from<O: SymOperator + ?Sized>(
    op: &O,
    start: SphereFactor,
    params: &AscentParams,
    seed: u64,
) -> Result<OptResult> {
    let (factor, report) = coordinate_ascent(op, start, params, seed)?;
    let value = objective(op, &factor)?;
    Ok(OptResult { value, factor, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_er, CenteredOperator};
    use crate::matrix::{sample_goe, SymDense};

    fn monotone(trace: &[f64]) -> bool {
        trace.windows(2).all(|w| w[1] >= w[0])
    }

    #[test]
    fn all_ones_matrix_aligns_rows() {
        let n = 30;
        let ones = SymDense::from_fn(n, |_, _| 1.0).unwrap();
        let start = init_factor(n, 4, 1).unwrap();
        let res = opt_k_from(&ones, start, &AscentParams::default(), 2).unwrap();
        assert!((res.value - (n * n) as f64).abs() < 1e-6);
        assert!(monotone(&res.report.objective_trace));
    }

    #[test]
    fn two_by_two_one_epoch() {
        let m = SymDense::from_fn(2, |i, j| if i != j { 1.0 } else { 0.0 }).unwrap();
        let start = init_factor(2, 3, 5).unwrap();
        let params = AscentParams {
            tol: 1e-12,
            max_epochs: 1,
        };
        let (f, report) = coordinate_ascent(&m, start, &params, 0).unwrap();
        assert_eq!(report.epochs, 1);
        assert!((crate::solver::objective(&m, &f).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn negative_identity_is_forced() {
        let n = 9;
        let neg = SymDense::from_fn(n, |i, j| if i == j { -1.0 } else { 0.0 }).unwrap();
        for k in [1, 3] {
            let res = opt_k(&neg, k, &SolverParams::default(), 4).unwrap();
            assert_eq!(res.value, -(n as f64));
        }
    }

    #[test]
    fn traces_are_monotone_and_feasible() {
        let g = gen_er(300, 6.0, 1).unwrap();
        let op = CenteredOperator::normalized(&g, 6.0).unwrap();
        let res = opt_k(&op, 8, &SolverParams::default(), 3).unwrap();
        assert!(monotone(&res.report.objective_trace));
        assert!(res.factor.max_row_norm_error() < 1e-12);
        let tracked = *res.report.objective_trace.last().unwrap();
        assert!((tracked - res.value).abs() < 1e-8 * res.value.abs().max(1.0));

        let w = sample_goe(60, 3);
        let res = opt_k(&w, 6, &SolverParams::default(), 3).unwrap();
        assert!(monotone(&res.report.objective_trace));
        let x = res.factor.gram().unwrap();
        assert!((0..60).all(|i| (x.get(i, i) - 1.0).abs() < 1e-12));
        assert!(*crate::matrix::eigvals_sym(&x).unwrap().last().unwrap() >= -1e-9);
    }

    #[test]
    fn restarts_independent_of_parallelism() {
        let w = sample_goe(50, 8);
        let seq = SolverParams {
            restarts: 4,
            ..SolverParams::default()
        };
        let par = SolverParams {
            parallelism: Parallelism::Parallel,
            ..seq
        };
        let a = opt_k(&w, 5, &seq, 10).unwrap();
        let b = opt_k(&w, 5, &par, 10).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.factor, b.factor);
        assert_eq!(a.report.restarts_used, 4);
    }

    #[test]
    fn warm_embedding_never_decreases() {
        let w = sample_goe(40, 6);
        let params = SolverParams::default();
        let mut prev = opt_k(&w, 2, &params, 1).unwrap();
        for k in 3..6 {
            let start = prev.factor.embed(k).unwrap();
            let next = opt_k_from(&w, start, &params.ascent, k as u64).unwrap();
            assert!(next.value >= prev.value - 1e-9);
            prev = next;
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let w = sample_goe(5, 1);
        let f = init_factor(6, 2, 1).unwrap();
        assert!(coordinate_ascent(&w, f, &AscentParams::default(), 0).is_err());
        let f = init_factor(5, 2, 1).unwrap();
        let bad = AscentParams {
            tol: 0.0,
            max_epochs: 3,
        };
        assert!(coordinate_ascent(&w, f, &bad, 0).is_err());
        let zero = SolverParams {
            restarts: 0,
            ..SolverParams::default()
        };
        assert!(opt_k(&w, 2, &zero, 0).is_err());
    }

    #[test]
    fn default_rank_rule() {
        assert_eq!(default_rank(1), 2);
        assert_eq!(default_rank(1000), 45);
        assert_eq!(default_rank(2000), 64);
        assert_eq!(default_rank(100_000), 64);
    }
}
