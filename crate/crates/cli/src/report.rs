use heun_gamma::Complex64;
use serde::Serialize;

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn to_json_line<S: Serialize>(v: &S) -> String {
    serde_json::to_string(v).expect("diagnostics serialize")
}

#[derive(Serialize)]
pub struct SolveReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub variant: &'static str,
    pub scheme: &'static str,
    pub n: usize,
    pub mu: [f64; 2],
    pub lambda: Option<[f64; 2]>,
    pub center: [f64; 2],
    pub weight_scale: [f64; 2],
    pub weight_power: u32,
    pub constant: [f64; 2],
    /// `null` when unbounded.
    pub convergence_radius: Option<f64>,
    pub center_irregular: bool,
    pub points: usize,
    pub outside_region: usize,
    pub max_residual: f64,
    pub samples: String,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub variant: &'static str,
    pub scheme: &'static str,
    pub n: usize,
    pub mu: [f64; 2],
    pub probes: usize,
    pub max_error: f64,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct RootEntry {
    pub q: [f64; 2],
    pub c_next: f64,
    pub c_after: f64,
    pub residual: Option<f64>,
}

#[derive(Serialize)]
pub struct TerminateReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub variant: &'static str,
    pub scheme: &'static str,
    pub n: usize,
    pub mu: [f64; 2],
    pub alpha: [f64; 2],
    pub certified: Vec<RootEntry>,
    pub uncertified: Vec<RootEntry>,
}

#[derive(Serialize)]
pub struct LambdaEntry {
    pub lambda: [f64; 2],
    pub forces: Vec<&'static str>,
    pub vanishing: Vec<&'static str>,
    pub effective_terms: usize,
    pub successive: bool,
}

#[derive(Serialize)]
pub struct ReductionsReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub variant: &'static str,
    pub scheme: &'static str,
    pub lambda: Option<[f64; 2]>,
    pub terms: usize,
    pub vanishing: Vec<&'static str>,
    pub effective_terms: usize,
    pub successive: bool,
    pub lambda_choices: Vec<LambdaEntry>,
}

#[derive(Serialize)]
pub struct SpecialReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub variant: &'static str,
    pub available: bool,
    pub closed_form: Option<&'static str>,
    pub constants: Option<[[f64; 2]; 2]>,
    pub matched_to_series: bool,
    pub max_series_difference: Option<f64>,
    pub max_residual: Option<f64>,
    pub samples: Option<String>,
}

#[derive(Serialize)]
pub struct TolFailure {
    pub status: &'static str,
    pub max_error: f64,
    pub max_residual: f64,
    pub tol: f64,
}

#[derive(Serialize)]
pub struct ErrorLine {
    pub status: &'static str,
    pub kind: &'static str,
    pub message: String,
}
