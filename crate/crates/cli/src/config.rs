//! Job configuration: JSON with complex numbers as `[re, im]`.

use std::path::PathBuf;

use heun_gamma::recurrence::{RecurrenceScheme, SchemeId};
use heun_gamma::{Complex64, ConfluentHeun64, Variant};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_N: usize = 60;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_GRID_COUNT: usize = 20;
/// Largest termination order accepted by `terminate`.
pub const MAX_TERMINATION_ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Auto {
    Auto,
}

/// `"auto"` or an explicit complex value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    Auto(Auto),
    Value([f64; 2]),
}

impl Default for MuSpec {
    fn default() -> Self {
        MuSpec::Auto(Auto::Auto)
    }
}

/// Evaluation points: explicit, or a sunflower pattern filling a disk.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
}

/// Output file names inside the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_samples")]
    pub samples: PathBuf,
    #[serde(default = "default_report")]
    pub report: PathBuf,
}

fn default_samples() -> PathBuf {
    "samples.csv".into()
}

fn default_report() -> PathBuf {
    "report.json".into()
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { samples: default_samples(), report: default_report() }
    }
}

fn default_n() -> usize {
    DEFAULT_N
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub variant: String,
    pub gamma: [f64; 2],
    pub delta: [f64; 2],
    pub epsilon: [f64; 2],
    pub alpha: [f64; 2],
    pub q: [f64; 2],
    pub scheme: String,
    #[serde(default)]
    pub mu: MuSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<[f64; 2]>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

pub fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl JobConfig {
    pub fn equation(&self) -> Result<ConfluentHeun64, CliError> {
        let v = Variant::parse(&self.variant)
            .ok_or_else(|| CliError::Validation(format!("variant ∈ {{sche, dche, bche, tche}}, got {:?}", self.variant)))?;
        Ok(ConfluentHeun64::new(v, cx(self.gamma), cx(self.delta), cx(self.epsilon), cx(self.alpha), cx(self.q)))
    }

    pub fn scheme(&self) -> Result<RecurrenceScheme<f64>, CliError> {
        let id: SchemeId = self
            .scheme
            .parse()
            .map_err(|_| CliError::Validation(format!("scheme is one of the catalogued names, got {:?}", self.scheme)))?;
        Ok(match self.lambda {
            Some(l) => RecurrenceScheme::with_lambda(id, cx(l)),
            None => RecurrenceScheme::new(id),
        })
    }

    pub fn mu(&self) -> Option<Complex64> {
        match self.mu {
            MuSpec::Auto(_) => None,
            MuSpec::Value(v) => Some(cx(v)),
        }
    }

    /// Check everything that can be checked without running a computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let eq = self.equation()?;
        let scheme = self.scheme()?;
        let finite = |p: [f64; 2]| p[0].is_finite() && p[1].is_finite();
        if ![self.gamma, self.delta, self.epsilon, self.alpha, self.q].into_iter().all(finite) {
            return Err(CliError::Validation("finite parameters".into()));
        }
        if self.lambda.is_some() && !scheme.id.has_free_lambda() {
            return Err(CliError::Validation(format!("λ override needs a scheme with a free λ; {} has none", scheme.id)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::Validation("tol > 0".into()));
        }
        if let Some(r) = self.grid.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(CliError::Validation("grid radius > 0".into()));
            }
        }
        if self.grid.count == Some(0) {
            return Err(CliError::Validation("grid count ≥ 1".into()));
        }
        if self.grid.points.as_ref().is_some_and(|p| p.is_empty()) {
            return Err(CliError::Validation("grid points nonempty".into()));
        }
        if self.grid.points.is_some() && (self.grid.radius.is_some() || self.grid.count.is_some() || self.grid.center.is_some()) {
            return Err(CliError::Validation("grid is either explicit points or center/radius/count".into()));
        }
        scheme.check(&eq).map_err(|e| match e {
            heun_gamma::Error::Precondition(m) => CliError::Validation(m),
            other => CliError::Compute(other),
        })
    }
}

/// Parse and validate a configuration document; defaults are filled in.
pub fn parse_config(text: &str) -> Result<JobConfig, CliError> {
    let cfg: JobConfig = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
