use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ExperimentKind;
use crate::Result;

/// Scalar outputs of one trial. Fields an experiment does not produce are
/// omitted from the JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub experiment: ExperimentKind,
    pub trial: usize,
    /// `derive_seed(config.seed, trial)`.
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_over_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wallclock_ms: Option<f64>,
}

impl TrialRecord {
    pub fn new(experiment: ExperimentKind, trial: usize, seed: u64) -> Self {
        TrialRecord {
            experiment,
            trial,
            seed,
            lambda: None,
            statistic: None,
            value_over_n: None,
            xi1: None,
            overlap: None,
            threshold: None,
            decision: None,
            extra: BTreeMap::new(),
            wallclock_ms: None,
        }
    }

    /// Numeric field by name; `decision` reads as 0 / 1 and unknown names
    /// are looked up in `extra`.
    pub fn field(&self, name: &str) -> Option<f64> {
        match name {
            "trial" => Some(self.trial as f64),
            "lambda" => self.lambda,
            "statistic" => self.statistic,
            "value_over_n" => self.value_over_n,
            "xi1" => self.xi1,
            "overlap" => self.overlap,
            "threshold" => self.threshold,
            "decision" => self.decision.map(|d| if d { 1.0 } else { 0.0 }),
            "wallclock_ms" => self.wallclock_ms,
            other => self.extra.get(other).copied(),
        }
    }

    /// Names of the numeric fields present, in a fixed order.
    pub fn field_names(&self) -> Vec<String> {
        let fixed = ["statistic", "value_over_n", "xi1", "overlap", "threshold", "decision"];
        fixed
            .iter()
            .filter(|f| self.field(f).is_some())
            .map(|f| f.to_string())
            .chain(self.extra.keys().cloned())
            .collect()
    }
}

/// Aggregate of one field within one λ group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub lambda: Option<f64>,
    pub field: String,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (0 for a single value).
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Group records by λ and aggregate every numeric field.
///
/// Records are sorted by `(λ, trial)` first, so the result does not depend
/// on the order in which trials finished.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut sorted: Vec<&TrialRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        let la = a.lambda.unwrap_or(f64::NEG_INFINITY);
        let lb = b.lambda.unwrap_or(f64::NEG_INFINITY);
        la.total_cmp(&lb).then(a.trial.cmp(&b.trial))
    });
    let mut rows = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let lambda = sorted[start].lambda;
        let end = start
            + sorted[start..]
                .iter()
                .take_while(|r| r.lambda.map(f64::to_bits) == lambda.map(f64::to_bits))
                .count();
        let group = &sorted[start..end];
        let mut fields: Vec<String> = Vec::new();
        for r in group {
            for f in r.field_names() {
                if !fields.contains(&f) {
                    fields.push(f);
                }
            }
        }
        for field in fields {
            let values: Vec<f64> = group.iter().filter_map(|r| r.field(&field)).collect();
            rows.push(aggregate(lambda, field, &values));
        }
        start = end;
    }
    rows
}

fn aggregate(lambda: Option<f64>, field: String, values: &[f64]) -> SummaryRow {
    let count = values.len();
    let mean = values.iter().sum::<f64>() / count as f64;
    let std = if count > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    SummaryRow {
        lambda,
        field,
        count,
        mean,
        std,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Look up the summary of `field` at `lambda`.
pub fn summary_of<'a>(rows: &'a [SummaryRow], lambda: Option<f64>, field: &str) -> Option<&'a SummaryRow> {
    rows.iter().find(|r| r.lambda == lambda && r.field == field)
}

pub fn records_to_jsonl(records: &[TrialRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn read_records(path: &Path) -> Result<Vec<TrialRecord>> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut records = Vec::new();
    for line in file.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str(&line)?);
        }
    }
    Ok(records)
}

/// CSV with header `lambda,field,count,mean,std,min,max` (empty λ when absent).
pub fn summary_to_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("lambda,field,count,mean,std,min,max\n");
    for r in rows {
        let lambda = r.lambda.map(|l| l.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{lambda},{},{},{},{},{},{}",
            r.field, r.count, r.mean, r.std, r.min, r.max
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(trial: usize, lambda: Option<f64>, stat: f64, decision: bool) -> TrialRecord {
        let mut r = TrialRecord::new(ExperimentKind::Detect2, trial, trial as u64);
        r.lambda = lambda;
        r.statistic = Some(stat);
        r.decision = Some(decision);
        r
    }

    #[test]
    fn summary_is_order_independent() {
        let recs = vec![
            rec(0, Some(1.0), 2.0, true),
            rec(1, Some(1.0), 2.5, false),
            rec(0, Some(0.5), 1.0, false),
            rec(2, Some(1.0), 3.0, true),
        ];
        let mut rev = recs.clone();
        rev.reverse();
        let a = summarize(&recs);
        assert_eq!(a, summarize(&rev));
        let s = summary_of(&a, Some(1.0), "statistic").unwrap();
        assert_eq!((s.count, s.mean, s.min, s.max), (3, 2.5, 2.0, 3.0));
        assert!((s.std - 0.5).abs() < 1e-15);
        let freq = summary_of(&a, Some(1.0), "decision").unwrap();
        assert!((freq.mean - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(summary_of(&a, Some(0.5), "statistic").unwrap().std, 0.0);
        assert!(summary_to_csv(&a).starts_with("lambda,field,count,mean,std,min,max\n0.5,statistic,1,"));
    }

    #[test]
    fn jsonl_round_trip() {
        let mut r = rec(3, None, 1.25, true);
        r.extra.insert("score".into(), 7.0);
        let text = records_to_jsonl(&[r.clone()]).unwrap();
        assert!(!text.contains("lambda"));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        std::fs::write(&path, text).unwrap();
        assert_eq!(read_records(&path).unwrap(), vec![r]);
    }
}
