use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::solver::{AscentParams, SolverParams};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// `OPT_k(A^cen)/(n√d)` on Erdős–Rényi graphs.
    ErValue,
    /// `OPT_k(A^cen)/n` on random d-regular graphs.
    RegularValue,
    /// Top eigenvalue of the deformed GOE over a λ grid.
    GoeBbap,
    /// `OPT_k(B(λ))/n` over a λ grid, optionally with a witness.
    GoeSdp,
    /// Two-community detection test on planted partitions.
    Detect2,
    /// r-community planted partitions, tested without knowledge of r.
    DetectR,
    /// Split / solve / threshold estimator.
    Estimate,
    /// Grid-searched witnesses for the deformed GOE.
    Witness,
    /// Rank-k sandwich and Gaussian rounding on GOE matrices.
    Grothendieck,
    /// Null statistics and the calibrated δ.
    Calibrate,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::ErValue => "er_value",
            ExperimentKind::RegularValue => "regular_value",
            ExperimentKind::GoeBbap => "goe_bbap",
            ExperimentKind::GoeSdp => "goe_sdp",
            ExperimentKind::Detect2 => "detect2",
            ExperimentKind::DetectR => "detect_r",
            ExperimentKind::Estimate => "estimate",
            ExperimentKind::Witness => "witness",
            ExperimentKind::Grothendieck => "grothendieck",
            ExperimentKind::Calibrate => "calibrate",
        }
    }

    fn uses_lambda_grid(self) -> bool {
        matches!(
            self,
            ExperimentKind::GoeBbap | ExperimentKind::GoeSdp | ExperimentKind::Witness
        )
    }

    fn is_dense(self) -> bool {
        self.uses_lambda_grid() || self == ExperimentKind::Grothendieck
    }
}

/// Model parameters; which ones are required depends on the experiment.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Average degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Number of communities (detect_r) or spike directions + 1 (witness).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Signal-to-noise ratio λ of a planted partition, used with `d` when
    /// `a`, `b` are not given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr: Option<f64>,
    /// Spike strengths for the dense experiments.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambdas: Vec<f64>,
    /// Threshold slack: the tests fire when the statistic is `≥ 2(1 + δ)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Calibration margin above the largest null statistic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    /// er_value: also compute `ξ₁(A^cen)` densely.
    #[serde(default, skip_serializing_if = "is_false")]
    pub spectral: bool,
    /// er_value: also solve `−A^cen`.
    #[serde(default, skip_serializing_if = "is_false")]
    pub negate: bool,
    /// goe_sdp: also grid-search a witness.
    #[serde(default, skip_serializing_if = "is_false")]
    pub witness: bool,
    /// detect2 / detect_r: report the sandwich upper bound.
    #[serde(default, skip_serializing_if = "is_false")]
    pub report_upper: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Factor rank; `⌈√(2n)⌉` capped at 64 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_epochs")]
    pub max_epochs: usize,
}

fn default_restarts() -> usize {
    SolverParams::default().restarts
}

fn default_tol() -> f64 {
    AscentParams::default().tol
}

fn default_max_epochs() -> usize {
    AscentParams::default().max_epochs
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            k: None,
            restarts: default_restarts(),
            tol: default_tol(),
            max_epochs: default_max_epochs(),
        }
    }
}

impl SolverConfig {
    pub fn params(&self) -> SolverParams {
        SolverParams {
            rank: self.k,
            restarts: self.restarts,
            ascent: AscentParams {
                tol: self.tol,
                max_epochs: self.max_epochs,
            },
            ..SolverParams::default()
        }
    }
}

/// A complete experiment description, stored as TOML.
///
/// ```toml
/// schema_version = 1
/// experiment = "er_value"
/// seed = 7
/// trials = 5
///
/// [model]
/// n = 2000
/// d = 30.0
///
/// [solver]
/// k = 64
/// restarts = 3
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    /// Master seed; trial `t` uses `derive_seed(seed, t)`. Must be below 2⁶³.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Output directory for records.jsonl and summary.csv.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Store per-trial wall-clock time. Disable for byte-reproducible records.
    #[serde(default = "default_true")]
    pub record_wallclock: bool,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_trials() -> usize {
    20
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    /// Desk-scale defaults for `kind` (n = 2000 for graphs, n = 1000 for
    /// GOE); the result passes [`validate`](Self::validate).
    pub fn new(kind: ExperimentKind) -> Self {
        use ExperimentKind::*;
        let mut model = ModelConfig {
            n: Some(2000),
            ..ModelConfig::default()
        };
        match kind {
            ErValue | Calibrate => model.d = Some(10.0),
            RegularValue => model.d = Some(4.0),
            GoeBbap | GoeSdp | Witness => {
                model.n = Some(1000);
                model.lambdas = vec![0.0, 0.5, 1.0, 1.5, 2.0];
            }
            Detect2 | Estimate => {
                model.d = Some(15.0);
                model.snr = Some(1.5);
            }
            DetectR => {
                model.n = Some(1998);
                model.r = Some(3);
                model.d = Some(15.0);
                model.snr = Some(1.5);
            }
            Grothendieck => model.n = Some(200),
        }
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment: kind,
            seed: 0,
            trials: default_trials(),
            output: None,
            record_wallclock: true,
            model,
            solver: SolverConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let field = e.span().map(|s| format!("bytes {}..{}", s.start, s.end)).unwrap_or_default();
            Error::config(field, e.message().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("<config>", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), format!("cannot read config: {e}")))?;
        Self::from_toml(&text)
    }

    pub fn n(&self) -> usize {
        self.model.n.unwrap_or(0)
    }

    /// Check every parameter the selected experiment consumes.
    pub fn validate(&self) -> Result<()> {
        use ExperimentKind::*;
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be >= 1"));
        }
        if self.seed > i64::MAX as u64 {
            return Err(Error::config("seed", "must be below 2^63"));
        }
        let m = &self.model;
        let n = m.n.ok_or_else(|| Error::config("model.n", "required"))?;
        if n < 4 {
            return Err(Error::config("model.n", format!("must be >= 4, got {n}")));
        }
        if self.experiment.is_dense() && n > crate::matrix::MAX_DENSE_DIM {
            return Err(Error::config(
                "model.n",
                format!("dense experiments allow n <= {}", crate::matrix::MAX_DENSE_DIM),
            ));
        }
        let s = &self.solver;
        if s.restarts == 0 {
            return Err(Error::config("solver.restarts", "must be >= 1"));
        }
        if !(s.tol > 0.0) {
            return Err(Error::config("solver.tol", "must be > 0"));
        }
        if s.max_epochs == 0 {
            return Err(Error::config("solver.max_epochs", "must be >= 1"));
        }
        if s.k == Some(0) {
            return Err(Error::config("solver.k", "must be >= 1"));
        }
        if self.experiment.uses_lambda_grid() {
            if m.lambdas.is_empty() {
                return Err(Error::config("model.lambdas", "at least one value required"));
            }
            if let Some(l) = m.lambdas.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
                return Err(Error::config("model.lambdas", format!("values must be finite and >= 0, got {l}")));
            }
        }
        match self.experiment {
            ErValue | Calibrate => {
                positive("model.d", m.d)?;
            }
            RegularValue => {
                let d = positive("model.d", m.d)?;
                if d.fract() != 0.0 || d >= n as f64 || (n as f64 * d) as usize % 2 == 1 {
                    return Err(Error::config(
                        "model.d",
                        format!("regular graphs need an integer d < n with n·d even, got {d}"),
                    ));
                }
            }
            Detect2 | Estimate => {
                if n % 2 == 1 {
                    return Err(Error::config("model.n", "two balanced communities need even n"));
                }
                self.planted_ab(2)?;
            }
            DetectR => {
                let r = self.communities()?;
                if n % r != 0 {
                    return Err(Error::config("model.n", format!("n must be divisible by r = {r}")));
                }
                self.planted_ab(r)?;
            }
            Witness => {
                if m.r.is_some() {
                    self.communities()?;
                }
            }
            GoeBbap | GoeSdp => {}
            Grothendieck => {
                if s.k.is_some_and(|k| k < 2) {
                    return Err(Error::config("solver.k", "the sandwich needs k >= 2"));
                }
            }
        }
        if let Some(delta) = m.delta {
            if !(delta > -1.0 && delta.is_finite()) {
                return Err(Error::config("model.delta", "must be finite and > -1"));
            }
        }
        if let Some(margin) = m.margin {
            if !(margin >= 0.0 && margin.is_finite()) {
                return Err(Error::config("model.margin", "must be finite and >= 0"));
            }
        }
        if self.experiment == Calibrate && self.trials < 10 {
            return Err(Error::config("trials", "calibration needs at least 10 null trials"));
        }
        Ok(())
    }

    pub(crate) fn communities(&self) -> Result<usize> {
        match self.model.r {
            Some(r) if r >= 2 => Ok(r),
            Some(r) => Err(Error::config("model.r", format!("must be >= 2, got {r}"))),
            None => Err(Error::config("model.r", "required")),
        }
    }

    /// `(a, b)` from the config, or from `d` and `snr` for `r` communities:
    /// `a = d + (r−1) λ√d`, `b = d − λ√d`.
    pub fn planted_ab(&self, r: usize) -> Result<(f64, f64)> {
        let m = &self.model;
        let (a, b) = match (m.a, m.b) {
            (Some(a), Some(b)) => (a, b),
            (None, None) => {
                let d = positive("model.d", m.d)?;
                let snr = m.snr.ok_or_else(|| Error::config("model.snr", "required when a, b are absent"))?;
                let s = snr * d.sqrt();
                (d + (r as f64 - 1.0) * s, d - s)
            }
            _ => return Err(Error::config("model.a", "give both a and b, or neither")),
        };
        let n = self.n() as f64;
        if !(a >= 0.0 && b >= 0.0 && a <= n && b <= n) {
            return Err(Error::config("model.a", format!("need 0 <= a, b <= n, got a = {a}, b = {b}")));
        }
        Ok((a, b))
    }
}

fn positive(field: &str, value: Option<f64>) -> Result<f64> {
    match value {
        Some(v) if v > 0.0 && v.is_finite() => Ok(v),
        Some(v) => Err(Error::config(field, format!("must be finite and > 0, got {v}"))),
        None => Err(Error::config(field, "required")),
    }
}
