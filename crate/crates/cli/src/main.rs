//! `elliptope`: run, calibrate and plot elliptope SDP experiments.
//!
//! Exit codes: 0 on success, 2 for configuration or input errors, 3 for
//! numerical or sampling failures, 1 for anything else (I/O).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use elliptope::experiments::{
    self, default_specs, emit_plotdata, read_records, write_outputs, ExperimentConfig, ExperimentKind, Overlay,
    PlotSpec, RunOutput,
};
use elliptope::par::{with_workers, Parallelism};
use elliptope::Error;

#[derive(Parser)]
#[command(name = "elliptope", version, about = "Elliptope SDP experiments on sparse random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Run null trials from a config (uses model.n and model.d) and report
    /// the calibrated δ.
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// Margin between the largest null statistic and the threshold.
        #[arg(long, default_value_t = experiments::DEFAULT_MARGIN)]
        margin: f64,
    },
    /// Turn records.jsonl into tab-separated plot series.
    Plotdata {
        #[arg(long)]
        records: PathBuf,
        /// Output directory (default: `plot/` next to the records).
        #[arg(long)]
        out: Option<PathBuf>,
        /// x column; with --y, emit only this series.
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
        #[arg(long, requires = "x")]
        overlay: Option<OverlayArg>,
    },
    /// Print a config with desk-scale defaults for an experiment.
    Template {
        #[arg(value_enum)]
        experiment: KindArg,
    },
}

#[derive(clap::Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides `output` in the config; default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run trials on W worker threads.
    #[arg(long, value_name = "W")]
    parallel: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OverlayArg {
    Bbap,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    ErValue,
    RegularValue,
    GoeBbap,
    GoeSdp,
    Detect2,
    DetectR,
    Estimate,
    Witness,
    Grothendieck,
    Calibrate,
}

impl From<KindArg> for ExperimentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::ErValue => ExperimentKind::ErValue,
            KindArg::RegularValue => ExperimentKind::RegularValue,
            KindArg::GoeBbap => ExperimentKind::GoeBbap,
            KindArg::GoeSdp => ExperimentKind::GoeSdp,
            KindArg::Detect2 => ExperimentKind::Detect2,
            KindArg::DetectR => ExperimentKind::DetectR,
            KindArg::Estimate => ExperimentKind::Estimate,
            KindArg::Witness => ExperimentKind::Witness,
            KindArg::Grothendieck => ExperimentKind::Grothendieck,
            KindArg::Calibrate => ExperimentKind::Calibrate,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::InvalidParameter(_) | Error::Format(_) | Error::Json(_) => 2,
        Error::NumericalFailure(_)
        | Error::SamplingFailure(_)
        | Error::DegenerateProjection { .. }
        | Error::SizeLimit { .. }
        | Error::DimensionMismatch { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(command: Command) -> elliptope::Result<()> {
    match command {
        Command::Run { common } => {
            let (config, dir) = load(&common)?;
            let output = execute(&config, common.parallel)?;
            write_outputs(&output, &dir)?;
            emit_plotdata(&output.records, &default_specs(&output.records), &dir.join("plot"))?;
            for row in &output.summary {
                let lambda = row.lambda.map(|l| format!("lambda={l} ")).unwrap_or_default();
                println!(
                    "{lambda}{}: mean {:.6} std {:.6} (n={})",
                    row.field, row.mean, row.std, row.count
                );
            }
            println!("wrote {}", dir.display());
            Ok(())
        }
        Command::Calibrate { common, margin } => {
            let (mut config, dir) = load(&common)?;
            config.experiment = ExperimentKind::Calibrate;
            config.model.margin = Some(margin);
            config.model.lambdas.clear();
            let output = execute(&config, common.parallel)?;
            write_outputs(&output, &dir)?;
            let delta = output.calibrated_delta.expect("calibration run");
            println!("delta = {delta}");
            println!("threshold = {}", 2.0 * (1.0 + delta));
            Ok(())
        }
        Command::Plotdata {
            records,
            out,
            x,
            y,
            overlay,
        } => {
            let recs = read_records(&records)?;
            let specs = match (x, y) {
                (Some(x), Some(y)) => vec![PlotSpec {
                    x,
                    y,
                    overlay: overlay.map(|OverlayArg::Bbap| Overlay::Bbap),
                }],
                _ => default_specs(&recs),
            };
            let dir = out.unwrap_or_else(|| records.parent().unwrap_or(Path::new(".")).join("plot"));
            for path in emit_plotdata(&recs, &specs, &dir)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Template { experiment } => {
            print!("{}", ExperimentConfig::new(experiment.into()).to_toml()?);
            Ok(())
        }
    }
}

fn load(common: &Common) -> elliptope::Result<(ExperimentConfig, PathBuf)> {
    let mut config = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(out) = &common.out {
        config.output = Some(out.clone());
    }
    config.validate()?;
    let dir = config.output.clone().unwrap_or_else(|| PathBuf::from("out"));
    Ok((config, dir))
}

fn execute(config: &ExperimentConfig, workers: Option<usize>) -> elliptope::Result<RunOutput> {
    match workers {
        Some(w) => with_workers(w, || experiments::run(config, Parallelism::Parallel)),
        None => experiments::run(config, Parallelism::Sequential),
    }
}
