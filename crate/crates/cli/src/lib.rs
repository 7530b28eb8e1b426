//! Batch front end for `heun_gamma`: configure an equation and an expansion
//! scheme in JSON, run one command, get a CSV sample table and a JSON report.

pub mod config;
mod report;

use std::fs;
use std::path::Path;

use heun_gamma::equations::{derive_v_equation, special_closed_form};
use heun_gamma::expansion::{assemble, assemble_auto, convergence_radius, GammaSeries};
use heun_gamma::oracle::{compare, residual_terms};
use heun_gamma::recurrence::{admissible_exponents, detect_reductions, RecurrenceScheme};
use heun_gamma::termination::find_terminating_q;
use heun_gamma::{Complex64, ConfluentHeun64};
use serde::Serialize;

pub use config::{parse_config, JobConfig};
use config::{cx, MAX_TERMINATION_ORDER};
use report::*;

pub const SCHEMA_VERSION: &str = "1";
pub const CSV_HEADER: &str = "z_re,z_im,u_re,u_im,uprime_re,uprime_im,residual";
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Compute(#[from] heun_gamma::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::Io(_) => "io",
            CliError::Compute(_) => "compute",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Verify,
    Terminate,
    Reductions,
    Special,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Terminate => "terminate",
            Command::Reductions => "reductions",
            Command::Special => "special",
        }
    }
}

/// Result of a successful run: the report text and whether verification passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub passed: bool,
    /// One-line reason when `passed` is false.
    pub failure: Option<String>,
}

fn to_json<S: Serialize>(v: &S) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn write(dir: &Path, name: &Path, text: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))
}

/// Run `cmd`, writing artifacts into `out`.
pub fn run(cmd: Command, cfg: &JobConfig, out: &Path) -> Result<Outcome, CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {}", out.display(), e)))?;
    let eq = cfg.equation()?;
    let scheme = cfg.scheme()?;
    let outcome = match cmd {
        Command::Solve => solve(cfg, &eq, &scheme, out)?,
        Command::Verify => verify(cfg, &eq, &scheme)?,
        Command::Terminate => terminate(cfg, &eq, &scheme)?,
        Command::Reductions => reductions(&eq, &scheme)?,
        Command::Special => special(cfg, &eq, &scheme, out)?,
    };
    write(out, &cfg.output.report, &outcome.report)?;
    Ok(outcome)
}

fn build_series(cfg: &JobConfig, eq: &ConfluentHeun64, scheme: &RecurrenceScheme<f64>) -> Result<GammaSeries<f64>, CliError> {
    let mut s = match cfg.mu() {
        Some(mu) => assemble(eq, scheme, mu, cfg.n)?,
        None => assemble_auto(eq, scheme, cfg.n)?,
    };
    s.fix_constant()?;
    Ok(s)
}

/// Evaluation points in configuration order.
pub fn grid_points(cfg: &JobConfig, eq: &ConfluentHeun64, scheme: &RecurrenceScheme<f64>) -> Result<Vec<Complex64>, CliError> {
    if let Some(p) = &cfg.grid.points {
        return Ok(p.iter().copied().map(cx).collect());
    }
    let center = match cfg.grid.center {
        Some(c) => cx(c),
        None => scheme.center_point(eq)?,
    };
    let radius = match cfg.grid.radius {
        Some(r) => r,
        None => 0.5 * convergence_radius(eq, scheme)?.min(1.0),
    };
    let n = cfg.grid.count.unwrap_or(config::DEFAULT_GRID_COUNT);
    Ok((0..n)
        .map(|k| {
            let rho = radius * ((k as f64 + 0.5) / n as f64).sqrt();
            center + Complex64::from_polar(rho, GOLDEN_ANGLE * k as f64)
        })
        .collect())
}

fn fmt_row(z: Complex64, u: Complex64, du: Complex64, r: f64) -> String {
    format!("{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n", z.re, z.im, u.re, u.im, du.re, du.im, r)
}

fn relative_residual(eq: &ConfluentHeun64, z: Complex64, u: Complex64, du: Complex64, d2u: Complex64) -> f64 {
    let (r, scale) = eq.residual(z, u, du, d2u);
    if scale == 0.0 {
        0.0
    } else {
        r.norm() / scale
    }
}

fn solve(cfg: &JobConfig, eq: &ConfluentHeun64, scheme: &RecurrenceScheme<f64>, out: &Path) -> Result<Outcome, CliError> {
    let series = build_series(cfg, eq, scheme)?;
    let points = grid_points(cfg, eq, scheme)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut outside = 0;
    let mut max_residual: f64 = 0.0;
    for &z in &points {
        let e = series.evaluate(z)?;
        let d2 = series.second_derivative(z)?;
        let r = relative_residual(eq, z, e.u, e.u_prime, d2);
        max_residual = max_residual.max(r);
        outside += e.outside_region as usize;
        csv.push_str(&fmt_row(z, e.u, e.u_prime, r));
    }
    write(out, &cfg.output.samples, &csv)?;
    let report = SolveReport {
        schema_version: SCHEMA_VERSION,
        command: "solve",
        variant: eq.variant.name(),
        scheme: scheme.id.name(),
        n: cfg.n,
        mu: pair(series.mu()),
        lambda: scheme.lambda_for(eq)?.map(pair),
        center: pair(series.center()),
        weight_scale: pair(series.s()),
        weight_power: series.p(),
        constant: pair(series.constant()),
        convergence_radius: finite_or_none(series.convergence_radius()),
        center_irregular: series.center_is_irregular(),
        points: points.len(),
        outside_region: outside,
        max_residual,
        samples: cfg.output.samples.display().to_string(),
    };
    Ok(Outcome { report: to_json(&report), passed: true, failure: None })
}

fn verify(cfg: &JobConfig, eq: &ConfluentHeun64, scheme: &RecurrenceScheme<f64>) -> Result<Outcome, CliError> {
    let series = build_series(cfg, eq, scheme)?;
    let points = grid_points(cfg, eq, scheme)?;
    if points.len() < 2 {
        return Err(CliError::Validation("verify needs at least 2 grid points".into()));
    }
    let max_error = compare(&series, &points)?;
    let op_v = derive_v_equation(&eq.operator(), series.weight())?;
    let max_residual = residual_terms(&op_v, series.coefficients(), series.center())
        .iter()
        .fold(0.0f64, |m, t| m.max(t.relative()));
    let passed = max_error <= cfg.tol && max_residual <= cfg.tol;
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        variant: eq.variant.name(),
        scheme: scheme.id.name(),
        n: cfg.n,
        mu: pair(series.mu()),
        probes: points.len(),
        max_error,
        max_residual,
        tol: cfg.tol,
        pass: passed,
    };
    let failure = (!passed).then(|| {
        to_json_line(&TolFailure { status: "tolerance_failure", max_error, max_residual, tol: cfg.tol })
    });
    Ok(Outcome { report: to_json(&report), passed, failure })
}

fn terminate(cfg: &JobConfig, eq: &ConfluentHeun64, scheme: &RecurrenceScheme<f64>) -> Result<Outcome, CliError> {
    if cfg.n == 0 || cfg.n > MAX_TERMINATION_ORDER {
        return Err(CliError::Validation(format!("1 ≤ N ≤ {} for the termination search", MAX_TERMINATION_ORDER)));
    }
    let mu = match cfg.mu() {
        Some(m) => m,
        // q is the unknown here; a generic value keeps z₀ off the center
        None => *admissible_exponents(&eq.with_q(Complex64::from_polar(eq.scale(), 0.1)), scheme)?
            .admissible
            .first()
            .ok_or_else(|| CliError::Compute(heun_gamma::Error::Degenerate("no admissible exponent".into())))?,
    };
    let cand = find_terminating_q(eq, scheme, cfg.n, mu).map_err(|e| match e {
        heun_gamma::Error::Precondition(m) => CliError::Validation(m),
        other => CliError::Compute(other),
    })?;
    let root = |r: &heun_gamma::termination::RootCertificate<f64>| RootEntry {
        q: pair(r.q),
        c_next: r.c_next,
        c_after: r.c_after,
        residual: r.residual,
    };
    let report = TerminateReport {
        schema_version: SCHEMA_VERSION,
        command: "terminate",
        variant: eq.variant.name(),
        scheme: scheme.id.name(),
        n: cand.n,
        mu: pair(cand.mu),
        alpha: pair(cand.alpha),
        certified: cand.certified.iter().map(root).collect(),
        uncertified: cand.uncertified.iter().map(root).collect(),
    };
    Ok(Outcome { report: to_json(&report), passed: true, failure: None })
}

fn reductions(eq: &ConfluentHeun64, scheme: &RecurrenceScheme<f64>) -> Result<Outcome, CliError> {
    let r = detect_reductions(eq, scheme)?;
    let report = ReductionsReport {
        schema_version: SCHEMA_VERSION,
        command: "reductions",
        variant: eq.variant.name(),
        scheme: r.scheme.name(),
        lambda: r.lambda.map(pair),
        terms: r.terms,
        vanishing: r.vanishing.clone(),
        effective_terms: r.effective_terms,
        successive: r.successive,
        lambda_choices: r
            .lambda_choices
            .iter()
            .map(|c| LambdaEntry {
                lambda: pair(c.lambda),
                forces: c.forces.clone(),
                vanishing: c.vanishing.clone(),
                effective_terms: c.effective_terms,
                successive: c.successive,
            })
            .collect(),
    };
    Ok(Outcome { report: to_json(&report), passed: true, failure: None })
}

/// `u''` from the closed form's `u'` by a five-point stencil.
fn stencil_second(f: impl Fn(Complex64) -> Result<Complex64, CliError>, z: Complex64) -> Result<Complex64, CliError> {
    let h = 1e-3 * (1.0 + z.norm());
    let d = |k: f64| f(z + Complex64::new(k * h, 0.0));
    Ok((d(-2.0)? - d(-1.0)? * 8.0 + d(1.0)? * 8.0 - d(2.0)?) / (12.0 * h))
}

fn special(cfg: &JobConfig, eq: &ConfluentHeun64, scheme: &RecurrenceScheme<f64>, out: &Path) -> Result<Outcome, CliError> {
    let form = match special_closed_form(eq) {
        Some(f) => f,
        None => {
            let report = SpecialReport {
                schema_version: SCHEMA_VERSION,
                command: "special",
                variant: eq.variant.name(),
                available: false,
                closed_form: None,
                constants: None,
                matched_to_series: false,
                max_series_difference: None,
                max_residual: None,
                samples: None,
            };
            return Ok(Outcome { report: to_json(&report), passed: true, failure: None });
        }
    };
    let points = grid_points(cfg, eq, scheme)?;
    // match the constants to the Gamma series when it can be built, else take the second basis solution
    let series = build_series(cfg, eq, scheme).ok();
    let (c1, c2) = match &series {
        Some(s) => {
            let z = s.default_reference();
            let e = s.evaluate(z)?;
            form.match_constants(z, e.u, e.u_prime)?
        }
        None => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
    };
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut max_residual: f64 = 0.0;
    let mut max_diff: f64 = 0.0;
    for &z in &points {
        let (u, du) = form.evaluate(c1, c2, z)?;
        let d2 = stencil_second(|w| Ok(form.evaluate(c1, c2, w)?.1), z)?;
        let r = relative_residual(eq, z, u, du, d2);
        max_residual = max_residual.max(r);
        if let Some(s) = &series {
            let us = s.evaluate(z)?.u;
            max_diff = max_diff.max((u - us).norm() / (us.norm() + 1.0));
        }
        csv.push_str(&fmt_row(z, u, du, r));
    }
    write(out, &cfg.output.samples, &csv)?;
    let report = SpecialReport {
        schema_version: SCHEMA_VERSION,
        command: "special",
        variant: eq.variant.name(),
        available: true,
        closed_form: Some(form.name()),
        constants: Some([pair(c1), pair(c2)]),
        matched_to_series: series.is_some(),
        max_series_difference: series.is_some().then_some(max_diff),
        max_residual: Some(max_residual),
        samples: Some(cfg.output.samples.display().to_string()),
    };
    Ok(Outcome { report: to_json(&report), passed: true, failure: None })
}

/// One-line JSON diagnostic for an error.
pub fn error_line(e: &CliError) -> String {
    to_json_line(&ErrorLine { status: "error", kind: e.kind(), message: e.to_string() })
}
