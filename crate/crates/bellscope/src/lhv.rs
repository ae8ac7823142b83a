//! Local-hidden-variable laboratory: the coincidence integral
//! `P(alpha,beta) = integral over lambda of a(lambda,alpha) b(lambda,beta) rho(lambda)`,
//! evaluated by quadrature or Monte Carlo, plus audits of the derivation steps
//! (the identically-zero reordering expression and the interchange condition).
//!
//! The hidden parameter lives on [0, 2*pi) with a uniform default density.
//! Quadrature is the composite midpoint rule, which handles the built-in
//! sign-response discontinuities without landing nodes on them.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::settings::MeasurementSettings;

/// Full circle of hidden-variable values.
pub const LAMBDA_PERIOD: f64 = std::f64::consts::TAU;

/// Smallest accepted node/sample budget.
pub const MIN_BUDGET: usize = 64;

/// Default quadrature node count.
pub const DEFAULT_NODES: usize = 4096;

/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: usize = 1_000_000;

/// Monte Carlo chunk size for parallel sampling; each chunk draws from its
/// own stream and the reduction is ordered, so thread count never changes
/// the result.
const MC_CHUNK: usize = 65_536;

type ResponseFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Response functions for both analyzer arms plus a density over the hidden
/// variable.
#[derive(Clone)]
pub struct HiddenVariableModel {
    name: String,
    response_a: ResponseFn,
    response_b: ResponseFn,
    density: DensityFn,
}

impl std::fmt::Debug for HiddenVariableModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HiddenVariableModel")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

fn uniform_density() -> DensityFn {
    Arc::new(|_| 1.0 / LAMBDA_PERIOD)
}

/// Sign with sgn(0) = 0.
fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl HiddenVariableModel {
    /// Validates and wraps the supplied functions.
    ///
    /// Responses are spot-checked for |r| <= 1 on a 1024-point lambda grid
    /// crossed with `check_angles`; the density must be nonnegative there and
    /// integrate to one within 1e-6.
    pub fn new(
        name: impl Into<String>,
        response_a: ResponseFn,
        response_b: ResponseFn,
        density: DensityFn,
        check_angles: &[f64],
    ) -> Result<Self> {
        let name = name.into();
        let grid = 1024;
        let mut density_sum = 0.0;
        for k in 0..grid {
            let lambda = LAMBDA_PERIOD * (k as f64 + 0.5) / grid as f64;
            let rho = density(lambda);
            if !rho.is_finite() || rho < 0.0 {
                return Err(Error::ModelValidation {
                    name,
                    detail: format!("density({lambda}) = {rho} is negative or non-finite"),
                });
            }
            density_sum += rho;
            for &angle in check_angles {
                for (arm, f) in [("a", &response_a), ("b", &response_b)] {
                    let r = f(lambda, angle);
                    if !r.is_finite() || r.abs() > 1.0 + 1e-12 {
                        return Err(Error::ModelValidation {
                            name,
                            detail: format!(
                                "response_{arm}({lambda}, {angle}) = {r} leaves [-1, 1]"
                            ),
                        });
                    }
                }
            }
        }
        let integral = density_sum * LAMBDA_PERIOD / grid as f64;
        if (integral - 1.0).abs() > 1e-6 {
            return Err(Error::ModelValidation {
                name,
                detail: format!("density integrates to {integral}, not 1"),
            });
        }
        Ok(Self {
            name,
            response_a,
            response_b,
            density,
        })
    }

    /// Deterministic sign responses: `a = sgn cos(lambda - alpha)`,
    /// `b = -sgn cos(lambda - beta)`; saturates the classical bound.
    pub fn sign_cos() -> Self {
        Self::builtin(
            "sign-cos",
            Arc::new(|l, a| sgn((l - a).cos())),
            Arc::new(|l, b| -sgn((l - b).cos())),
        )
    }

    /// Setting-independent unit responses.
    pub fn constant() -> Self {
        Self::builtin("constant", Arc::new(|_, _| 1.0), Arc::new(|_, _| 1.0))
    }

    /// Smooth sub-saturating responses: `a = cos(lambda - alpha)`,
    /// `b = -cos(lambda - beta)`.
    pub fn smooth_cos() -> Self {
        Self::builtin(
            "smooth-cos",
            Arc::new(|l, a| (l - a).cos()),
            Arc::new(|l, b| -(l - b).cos()),
        )
    }

    fn builtin(name: &str, a: ResponseFn, b: ResponseFn) -> Self {
        let check: Vec<f64> = (0..8).map(|k| k as f64 * LAMBDA_PERIOD / 8.0).collect();
        Self::new(name, a, b, uniform_density(), &check).expect("built-in models pass validation")
    }

    /// Look up a built-in model.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "sign-cos" => Ok(Self::sign_cos()),
            "constant" => Ok(Self::constant()),
            "smooth-cos" => Ok(Self::smooth_cos()),
            other => Err(Error::UnknownName {
                kind: "hidden-variable model",
                name: other.to_string(),
            }),
        }
    }

    /// Names of the built-in models.
    pub fn builtin_names() -> &'static [&'static str] {
        &["sign-cos", "constant", "smooth-cos"]
    }

    /// Model from piecewise-constant response tables with uniform density.
    /// The angle parameter acts as a shift: `response(lambda - angle)`.
    pub fn from_tables(
        name: impl Into<String>,
        table_a: ResponseTable,
        table_b: ResponseTable,
    ) -> Result<Self> {
        let check: Vec<f64> = (0..8).map(|k| k as f64 * LAMBDA_PERIOD / 8.0).collect();
        Self::new(
            name,
            Arc::new(move |l, angle| table_a.lookup(l - angle)),
            Arc::new(move |l, angle| table_b.lookup(l - angle)),
            uniform_density(),
            &check,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn response_a(&self, lambda: f64, alpha: f64) -> f64 {
        (self.response_a)(lambda, alpha)
    }

    pub fn response_b(&self, lambda: f64, beta: f64) -> f64 {
        (self.response_b)(lambda, beta)
    }

    pub fn density(&self, lambda: f64) -> f64 {
        (self.density)(lambda)
    }
}

/// Piecewise-constant function on [0, 2*pi), defined by breakpoints.
#[derive(Debug, Clone)]
pub struct ResponseTable {
    lambdas: Vec<f64>,
    responses: Vec<f64>,
}

impl ResponseTable {
    /// Rows of (lambda, response); lambdas must be strictly increasing inside
    /// [0, 2*pi) and responses inside [-1, 1]. The value holds from each
    /// lambda up to the next breakpoint (wrapping at the period).
    pub fn new(rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidConfig("response table is empty".into()));
        }
        let mut prev = f64::NEG_INFINITY;
        for &(l, r) in &rows {
            if !(0.0..LAMBDA_PERIOD).contains(&l) || l <= prev {
                return Err(Error::InvalidConfig(format!(
                    "table lambdas must be strictly increasing in [0, 2pi); got {l}"
                )));
            }
            if !r.is_finite() || r.abs() > 1.0 {
                return Err(Error::InvalidConfig(format!(
                    "table response {r} leaves [-1, 1]"
                )));
            }
            prev = l;
        }
        let (lambdas, responses) = rows.into_iter().unzip();
        Ok(Self { lambdas, responses })
    }

    /// Load rows from CSV with columns `lambda,response` (a header line is
    /// allowed).
    pub fn from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let display = path.display().to_string();
        let mut rows = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if idx == 0 && line.to_ascii_lowercase().starts_with("lambda") {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |field: Option<&str>| -> Result<f64> {
                field
                    .map(str::trim)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::CsvFormat {
                        path: display.clone(),
                        detail: format!("line {}: expected `lambda,response`", idx + 1),
                    })
            };
            let lambda = parse(parts.next())?;
            let response = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::CsvFormat {
                    path: display,
                    detail: format!("line {}: too many columns", idx + 1),
                });
            }
            rows.push((lambda, response));
        }
        Self::new(rows).map_err(|e| Error::CsvFormat {
            path: display,
            detail: e.to_string(),
        })
    }

    fn lookup(&self, x: f64) -> f64 {
        let x = x.rem_euclid(LAMBDA_PERIOD);
        // Last breakpoint at or below x; before the first one, wrap to the
        // final segment.
        match self.lambdas.partition_point(|&l| l <= x) {
            0 => *self.responses.last().expect("non-empty"),
            k => self.responses[k - 1],
        }
    }
}

/// How a correlation estimate was computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum EstimationMethod {
    Quadrature,
    MonteCarlo { seed: u64 },
}

/// A single coincidence-correlation estimate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorrelationEstimate {
    pub value: f64,
    pub method: EstimationMethod,
    /// Node count (quadrature) or sample count (Monte Carlo).
    pub budget: usize,
    /// Standard error of the mean; zero for quadrature.
    pub stderr: f64,
}

fn check_budget(budget: usize) -> Result<()> {
    if budget < MIN_BUDGET {
        return Err(Error::InvalidConfig(format!(
            "budget {budget} is below the minimum of {MIN_BUDGET}"
        )));
    }
    Ok(())
}

/// Midpoint nodes of the lambda circle.
fn midpoint_nodes(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| LAMBDA_PERIOD * (k as f64 + 0.5) / n as f64)
}

fn quadrature<F: Fn(f64) -> f64>(n: usize, integrand: F) -> f64 {
    let w = LAMBDA_PERIOD / n as f64;
    midpoint_nodes(n).map(|l| integrand(l) * w).sum()
}

/// Draw one lambda from the model density by rejection against a flat
/// envelope (exact acceptance for the uniform default).
fn sample_lambda<R: Rng>(model: &HiddenVariableModel, envelope: f64, rng: &mut R) -> f64 {
    loop {
        let lambda = rng.random::<f64>() * LAMBDA_PERIOD;
        let u = rng.random::<f64>() * envelope;
        if u <= model.density(lambda) {
            return lambda;
        }
    }
}

fn density_envelope(model: &HiddenVariableModel) -> f64 {
    let mut max = 0.0_f64;
    for lambda in midpoint_nodes(4096) {
        max = max.max(model.density(lambda));
    }
    max * (1.0 + 1e-9)
}

/// The coincidence correlation `P(alpha, beta)`.
pub fn correlation(
    model: &HiddenVariableModel,
    alpha: f64,
    beta: f64,
    method: EstimationMethod,
    budget: usize,
) -> Result<CorrelationEstimate> {
    check_budget(budget)?;
    match method {
        EstimationMethod::Quadrature => {
            let value = quadrature(budget, |l| {
                model.response_a(l, alpha) * model.response_b(l, beta) * model.density(l)
            });
            Ok(CorrelationEstimate {
                value,
                method,
                budget,
                stderr: 0.0,
            })
        }
        EstimationMethod::MonteCarlo { seed } => {
            Ok(monte_carlo_correlation(model, alpha, beta, seed, 0, budget))
        }
    }
}

/// Monte Carlo estimate with chunked parallel sampling. `pair_index`
/// partitions the stream space so the four CHSH correlations stay
/// independent under one seed.
fn monte_carlo_correlation(
    model: &HiddenVariableModel,
    alpha: f64,
    beta: f64,
    seed: u64,
    pair_index: u64,
    samples: usize,
) -> CorrelationEstimate {
    let envelope = density_envelope(model);
    let chunks: Vec<(usize, usize)> = (0..samples.div_ceil(MC_CHUNK))
        .map(|c| (c, MC_CHUNK.min(samples - c * MC_CHUNK)))
        .collect();

    // (sum, sum of squares) per chunk, reduced in chunk order.
    let partials: Vec<(f64, f64)> = chunks
        .par_iter()
        .map(|&(chunk, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((pair_index << 32) | chunk as u64);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..count {
                let lambda = sample_lambda(model, envelope, &mut rng);
                let product = model.response_a(lambda, alpha) * model.response_b(lambda, beta);
                sum += product;
                sumsq += product * product;
            }
            (sum, sumsq)
        })
        .collect();

    let (sum, sumsq) = partials
        .iter()
        .fold((0.0, 0.0), |(s, q), &(cs, cq)| (s + cs, q + cq));
    let n = samples as f64;
    let mean = sum / n;
    let variance = ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0);
    CorrelationEstimate {
        value: mean,
        method: EstimationMethod::MonteCarlo { seed },
        budget: samples,
        stderr: (variance / n).sqrt(),
    }
}

/// CHSH combination with its four per-pair estimates.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChshEstimate {
    pub value: f64,
    pub pairs: [CorrelationEstimate; 4],
    /// Root-sum-square of the four standard errors (zero for quadrature).
    pub aggregate_stderr: f64,
}

/// The Bell combination from four coincidence correlations.
pub fn chsh_value(
    model: &HiddenVariableModel,
    settings: &MeasurementSettings,
    method: EstimationMethod,
    budget: usize,
) -> Result<ChshEstimate> {
    check_budget(budget)?;
    let pairs_in = [
        (settings.alpha1, settings.beta1),
        (settings.alpha1, settings.beta2),
        (settings.alpha2, settings.beta1),
        (settings.alpha2, settings.beta2),
    ];
    let mut pairs = Vec::with_capacity(4);
    for (i, &(a, b)) in pairs_in.iter().enumerate() {
        let est = match method {
            EstimationMethod::Quadrature => correlation(model, a, b, method, budget)?,
            EstimationMethod::MonteCarlo { seed } => {
                monte_carlo_correlation(model, a, b, seed, i as u64, budget)
            }
        };
        pairs.push(est);
    }
    let pairs: [CorrelationEstimate; 4] = pairs.try_into().expect("four pairs");
    let value = pairs[0].value + pairs[1].value + pairs[2].value - pairs[3].value;
    let aggregate_stderr = pairs
        .iter()
        .map(|p| p.stderr * p.stderr)
        .sum::<f64>()
        .sqrt();
    Ok(ChshEstimate {
        value,
        pairs,
        aggregate_stderr,
    })
}

/// Quadrature residue of the reordering expression
/// `a1 b1 a2 b2 - a1 b2 a2 b1` under the model density.
///
/// Scalar responses commute, so the integrand vanishes pointwise; the return
/// value is the numerical residue of that identity (zero up to rounding,
/// per node, not asymptotically).
pub fn zero_expression_audit(
    model: &HiddenVariableModel,
    settings: &MeasurementSettings,
    budget: usize,
) -> Result<f64> {
    check_budget(budget)?;
    Ok(quadrature(budget, |l| {
        let a1 = model.response_a(l, settings.alpha1);
        let a2 = model.response_a(l, settings.alpha2);
        let b1 = model.response_b(l, settings.beta1);
        let b2 = model.response_b(l, settings.beta2);
        (a1 * b1 * a2 * b2 - a1 * b2 * a2 * b1) * model.density(l)
    }))
}

/// `|P(alpha, beta1) - P(alpha, beta2)|`: how strongly the model violates the
/// interchange assumption that coincidence probabilities survive swapping one
/// side's orientation. Genuine polarization models give a nonzero gap.
pub fn interchange_gap(
    model: &HiddenVariableModel,
    alpha: f64,
    beta1: f64,
    beta2: f64,
    budget: usize,
) -> Result<f64> {
    let p1 = correlation(model, alpha, beta1, EstimationMethod::Quadrature, budget)?;
    let p2 = correlation(model, alpha, beta2, EstimationMethod::Quadrature, budget)?;
    Ok((p1.value - p2.value).abs())
}

/// Both sides of the difference identity
/// `P(alpha1,beta1) - P(alpha1,beta2) = integral a1 (b1 - b2) rho`:
/// the same integral split two ways, returned as (lhs, rhs).
pub fn bell_difference_decomposition(
    model: &HiddenVariableModel,
    alpha1: f64,
    beta1: f64,
    beta2: f64,
    budget: usize,
) -> Result<(f64, f64)> {
    let p11 = correlation(model, alpha1, beta1, EstimationMethod::Quadrature, budget)?;
    let p12 = correlation(model, alpha1, beta2, EstimationMethod::Quadrature, budget)?;
    let lhs = p11.value - p12.value;
    let rhs = quadrature(budget, |l| {
        let a = model.response_a(l, alpha1);
        let b = model.response_b(l, beta1) - model.response_b(l, beta2);
        a * b * model.density(l)
    });
    Ok((lhs, rhs))
}
