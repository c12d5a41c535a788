//! Config-driven, seed-reproducible experiment harness.
//!
//! An [`ExperimentConfig`] names one experiment, its model and solver
//! parameters, a trial count and a master seed. Trial `t` draws everything
//! from `derive_seed(seed, t)` (see [`crate::rng`]), so a run is a pure
//! function of its config; with a λ grid, trial `t` reuses the same seed at
//! every λ. Trials run sequentially by default, or on the rayon pool with
//! [`Parallelism::Parallel`]; records come back in the same order either way.

mod config;
mod plot;
mod records;

pub use config::{ExperimentConfig, ExperimentKind, ModelConfig, SolverConfig, SCHEMA_VERSION};
pub use plot::{default_specs, emit_plotdata, parse_tsv, series, to_tsv, Overlay, PlotPoint, PlotSpec};
pub use records::{read_records, records_to_jsonl, summarize, summary_of, summary_to_csv, SummaryRow, TrialRecord};

use std::path::Path;
use std::time::Instant;

use crate::detection::{
    calibrate_delta, estimate_partition, test_r_communities, test_two_communities, DegreeSpec, EstimateOptions,
    TestOptions,
};
use crate::graph::{gen_er, gen_planted_2, gen_planted_r, gen_regular, CenteredOperator, Labels};
use crate::matrix::{bbap_prediction, deformed_goe, deformed_goe_r, eig_sym, eigvals_sym, sample_goe};
use crate::par::{self, Parallelism};
use crate::rng::derive_seed;
use crate::solver::{grothendieck_round, objective, opt_k, sdp_sandwich_dense, Negated};
use crate::witness::{grid_search_from_spectrum, WitnessGrid, WitnessKind};
use crate::{Error, Result};

/// Threshold slack used by the detection experiments when `model.delta` is absent.
pub const DEFAULT_DELTA: f64 = 0.05;
/// Calibration margin used when `model.margin` is absent.
pub const DEFAULT_MARGIN: f64 = 0.02;

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
    /// δ from a `calibrate` run.
    pub calibrated_delta: Option<f64>,
}

/// Run every trial of `config`.
pub fn run(config: &ExperimentConfig, mode: Parallelism) -> Result<RunOutput> {
    config.validate()?;
    let lambdas: Vec<Option<f64>> = if config.model.lambdas.is_empty() {
        vec![None]
    } else {
        config.model.lambdas.iter().map(|&l| Some(l)).collect()
    };
    let trials = config.trials;
    let results = par::map_indexed(lambdas.len() * trials, mode, |job| {
        let (lambda, t) = (lambdas[job / trials], job % trials);
        let seed = derive_seed(config.seed, t as u64);
        let start = Instant::now();
        let mut record = TrialRecord::new(config.experiment, t, seed);
        record.lambda = lambda;
        run_trial(config, &mut record)?;
        if config.record_wallclock {
            record.wallclock_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        Ok(record)
    });
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    let calibrated_delta = if config.experiment == ExperimentKind::Calibrate {
        let stats: Vec<f64> = records.iter().filter_map(|r| r.statistic).collect();
        Some(calibrate_delta(&stats, config.model.margin.unwrap_or(DEFAULT_MARGIN))?)
    } else {
        None
    };
    Ok(RunOutput {
        summary: summarize(&records),
        records,
        calibrated_delta,
    })
}

/// Run the null trials of `null` (an Erdős–Rényi model with `n`, `d`) and
/// return the δ placing `2(1 + δ)` at `margin` above the largest statistic.
pub fn calibrate_threshold(null: &ExperimentConfig, margin: f64, mode: Parallelism) -> Result<f64> {
    let mut config = null.clone();
    config.experiment = ExperimentKind::Calibrate;
    config.model.margin = Some(margin);
    config.model.lambdas.clear();
    run(&config, mode)?
        .calibrated_delta
        .ok_or_else(|| Error::NumericalFailure("calibration produced no threshold".into()))
}

/// Write `records.jsonl`, `summary.csv` and, for calibration runs,
/// `calibration.json` into `dir`.
pub fn write_outputs(output: &RunOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("records.jsonl"), records_to_jsonl(&output.records)?)?;
    std::fs::write(dir.join("summary.csv"), summary_to_csv(&output.summary))?;
    if let Some(delta) = output.calibrated_delta {
        let json = serde_json::json!({ "delta": delta, "threshold": 2.0 * (1.0 + delta) });
        std::fs::write(dir.join("calibration.json"), serde_json::to_string_pretty(&json)? + "\n")?;
    }
    Ok(())
}

fn run_trial(config: &ExperimentConfig, rec: &mut TrialRecord) -> Result<()> {
    use ExperimentKind::*;
    let m = &config.model;
    let n = config.n();
    let params = config.solver.params();
    let k = params.resolved_rank(n);
    let s = rec.seed;
    let (s0, s1, s2) = (derive_seed(s, 0), derive_seed(s, 1), derive_seed(s, 2));
    match config.experiment {
        ErValue | Calibrate => {
            let d = m.d.expect("validated");
            let g = gen_er(n, d, s0)?;
            let op = CenteredOperator::normalized(&g, d)?;
            let stat = opt_k(&op, k, &params, s1)?.value / n as f64;
            rec.statistic = Some(stat);
            rec.value_over_n = Some(stat * d.sqrt());
            if config.experiment == Calibrate {
                return Ok(());
            }
            if m.negate {
                let neg = opt_k(&Negated(&op), k, &params, s2)?.value / n as f64;
                rec.extra.insert("neg_statistic".into(), neg);
            }
            if m.spectral {
                let xi1 = eigvals_sym(&CenteredOperator::new(&g, d, 1.0)?.to_dense()?)?[0];
                rec.xi1 = Some(xi1);
            }
        }
        RegularValue => {
            let d = m.d.expect("validated");
            let g = gen_regular(n, d as usize, s0)?;
            let op = CenteredOperator::new(&g, d, 1.0)?;
            let value = opt_k(&op, k, &params, s1)?.value / n as f64;
            rec.value_over_n = Some(value);
            rec.statistic = Some(value / d.sqrt());
            rec.extra.insert("target".into(), 2.0 * (d - 1.0).sqrt());
        }
        GoeBbap => {
            let lambda = rec.lambda.expect("lambda grid");
            let b = deformed_goe(n, lambda, s0);
            rec.xi1 = Some(eigvals_sym(&b)?[0]);
            rec.extra.insert("bbap".into(), bbap_prediction(lambda));
        }
        GoeSdp => {
            let lambda = rec.lambda.expect("lambda grid");
            let b = deformed_goe(n, lambda, s0);
            rec.value_over_n = Some(opt_k(&b, k, &params, s1)?.value / n as f64);
            if m.witness {
                let spec = eig_sym(&b)?;
                rec.xi1 = Some(spec.largest());
                let res = grid_search_from_spectrum(
                    &b,
                    &spec,
                    WitnessKind::Supercritical,
                    &WitnessGrid::default(),
                    Parallelism::Sequential,
                )?;
                rec.extra.insert("witness_value".into(), res.value);
                rec.extra.insert("witness_eps".into(), res.eps);
                rec.extra.insert("witness_delta".into(), res.delta);
            } else {
                rec.xi1 = Some(eigvals_sym(&b)?[0]);
            }
        }
        Witness => {
            let lambda = rec.lambda.expect("lambda grid");
            let r = m.r.unwrap_or(2);
            let (b, kind) = if r == 2 {
                (deformed_goe(n, lambda, s0), WitnessKind::Supercritical)
            } else {
                let labels = Labels::new(r, (0..n).map(|i| i % r).collect())?;
                (deformed_goe_r(n, r, lambda, &labels, s0)?, WitnessKind::SupercriticalR { r })
            };
            let spec = eig_sym(&b)?;
            let res = grid_search_from_spectrum(&b, &spec, kind, &WitnessGrid::default(), Parallelism::Sequential)?;
            rec.value_over_n = Some(res.value);
            rec.xi1 = Some(spec.largest());
            rec.extra.insert("eps".into(), res.eps);
            rec.extra.insert("delta".into(), res.delta);
            rec.extra.insert("max_diag_error".into(), res.report.max_diag_error);
            if let Some(min) = res.report.min_eigenvalue {
                rec.extra.insert("min_eigenvalue".into(), min);
            }
        }
        Detect2 | DetectR => {
            let r = if config.experiment == Detect2 { 2 } else { config.communities()? };
            let (a, b) = config.planted_ab(r)?;
            let g = if r == 2 {
                gen_planted_2(n, a, b, s0)?.0
            } else {
                gen_planted_r(n, r, a, b, s0)?.0
            };
            rec.lambda = Some((a - b) / (r as f64 * (a + (r as f64 - 1.0) * b)).sqrt());
            let opts = TestOptions {
                delta: m.delta.unwrap_or(DEFAULT_DELTA),
                solver: params,
                report_upper: m.report_upper,
            };
            let res = if r == 2 {
                let spec = match m.d {
                    Some(d) => DegreeSpec::Known(d),
                    None => DegreeSpec::Planted { r, a, b },
                };
                test_two_communities(&g, spec, &opts, s1)?
            } else {
                test_r_communities(&g, r, None, m.d, &opts, s1)?
            };
            rec.statistic = Some(res.statistic);
            rec.threshold = Some(res.threshold);
            rec.decision = Some(res.decision);
            rec.extra.insert("d_used".into(), res.d_used);
            if let Some(u) = res.upper {
                rec.extra.insert("upper".into(), u);
            }
        }
        Estimate => {
            let (a, b) = config.planted_ab(2)?;
            let (g, labels) = gen_planted_2(n, a, b, s0)?;
            rec.lambda = Some((a - b) / (2.0 * (a + b)).sqrt());
            let opts = EstimateOptions {
                d: m.d,
                solver: params,
                diagonal: 0.0,
            };
            let res = estimate_partition(&g, &opts, Some(&labels), s1)?;
            rec.overlap = res.overlap;
            rec.extra.insert("score".into(), res.score as f64);
            rec.extra.insert("support".into(), res.xhat.iter().filter(|&&x| x != 0).count() as f64);
        }
        Grothendieck => {
            let w = sample_goe(n, s0);
            let k = params.rank.unwrap_or(4).max(2);
            let sandwich = sdp_sandwich_dense(&w, k, &params, s1)?;
            let big = opt_k(&w, (4 * k).min(n), &params, s2)?;
            let rounded = grothendieck_round(&big.factor, k, derive_seed(s, 3))?;
            let nf = n as f64;
            rec.value_over_n = Some(sandwich.lower / nf);
            rec.extra.insert("upper_over_n".into(), sandwich.upper / nf);
            rec.extra.insert("alpha_k".into(), sandwich.alpha_k);
            rec.extra.insert("rank_4k_over_n".into(), big.value / nf);
            rec.extra.insert("rounded_over_n".into(), objective(&w, &rounded)? / nf);
        }
    }
    Ok(())
}
