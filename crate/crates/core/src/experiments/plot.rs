use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ExperimentKind, TrialRecord};
use crate::matrix::bbap_prediction;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overlay {
    /// `bbap_prediction(x)`.
    Bbap,
}

impl Overlay {
    fn name(self) -> &'static str {
        match self {
            Overlay::Bbap => "bbap",
        }
    }

    fn eval(self, x: f64) -> f64 {
        match self {
            Overlay::Bbap => bbap_prediction(x),
        }
    }
}

/// One series: mean and standard error of `y` per distinct `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub x: String,
    pub y: String,
    pub overlay: Option<Overlay>,
}

impl PlotSpec {
    pub fn file_name(&self) -> String {
        format!("{}_vs_{}.tsv", self.y, self.x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    pub err: f64,
    pub overlay: Option<f64>,
}

/// Series for every numeric field against λ (or the trial index when there
/// is no λ). The ξ₁ series of a BBAP sweep carries the prediction overlay.
pub fn default_specs(records: &[TrialRecord]) -> Vec<PlotSpec> {
    let x = if records.iter().any(|r| r.lambda.is_some()) {
        "lambda"
    } else {
        "trial"
    };
    let mut ys: Vec<String> = Vec::new();
    for r in records {
        for f in r.field_names() {
            if f != "threshold" && !ys.contains(&f) {
                ys.push(f);
            }
        }
    }
    let bbap = records.iter().any(|r| r.experiment == ExperimentKind::GoeBbap);
    ys.into_iter()
        .map(|y| PlotSpec {
            overlay: (bbap && x == "lambda" && y == "xi1").then_some(Overlay::Bbap),
            x: x.to_string(),
            y,
        })
        .collect()
}

pub fn series(records: &[TrialRecord], spec: &PlotSpec) -> Vec<PlotPoint> {
    let mut pairs: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| Some((r.field(&spec.x)?, r.field(&spec.y)?)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut points = Vec::new();
    for group in pairs.chunk_by(|a, b| a.0 == b.0) {
        let x = group[0].0;
        let k = group.len() as f64;
        let mean = group.iter().map(|p| p.1).sum::<f64>() / k;
        let err = if group.len() > 1 {
            let var = group.iter().map(|p| (p.1 - mean).powi(2)).sum::<f64>() / (k - 1.0);
            (var / k).sqrt()
        } else {
            0.0
        };
        points.push(PlotPoint {
            x,
            y: mean,
            err,
            overlay: spec.overlay.map(|o| o.eval(x)),
        });
    }
    points
}

/// Tab-separated columns `x`, `y`, `y_err` (and the overlay), with a header.
pub fn to_tsv(spec: &PlotSpec, points: &[PlotPoint]) -> String {
    let mut out = format!("{}\t{}\t{}_err", spec.x, spec.y, spec.y);
    if let Some(o) = spec.overlay {
        let _ = write!(out, "\t{}", o.name());
    }
    out.push('\n');
    for p in points {
        let _ = write!(out, "{}\t{}\t{}", p.x, p.y, p.err);
        if let Some(v) = p.overlay {
            let _ = write!(out, "\t{v}");
        }
        out.push('\n');
    }
    out
}

/// Parse a file written by [`to_tsv`] into its header and numeric rows.
pub fn parse_tsv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Format("plot file has no header".into()))?
        .split('\t')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split('\t')
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Format(format!("row {}: {e}", i + 1)))?;
        if row.len() != header.len() {
            return Err(Error::Format(format!("row {} has {} columns, expected {}", i + 1, row.len(), header.len())));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Write one TSV file per spec into `dir`; returns the paths written.
pub fn emit_plotdata(records: &[TrialRecord], specs: &[PlotSpec], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for spec in specs {
        let path = dir.join(spec.file_name());
        std::fs::write(&path, to_tsv(spec, &series(records, spec)))?;
        paths.push(path);
    }
    Ok(paths)
}
