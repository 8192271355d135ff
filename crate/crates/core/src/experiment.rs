//! Batch experiments that turn each checkable claim into a table of
//! [`ReportRow`]s.
//!
//! Every Monte Carlo cell draws from its own stream index, derived from the
//! experiment and the cell parameters, so rows do not depend on which other
//! cells were requested or on evaluation order.

use std::path::PathBuf;

use thiserror::Error;

use crate::analytic::{
    asymptotic_limit, best_constant, gaussian_even_moment, gaussian_psi2_norm_exact,
    kk_upper_bound, mgf_closed_form, mgf_series, Dimension, MomentOrder, DEFAULT_MAX_TERMS,
};
use crate::orlicz::{empirical_orlicz_norm, YoungExponent};
use crate::sampler::{
    collect_batch, empirical_tail, moment_with_error, CoefficientVector, RandomStream, SampleKind,
    DEFAULT_SAMPLES,
};
use crate::tailbounds::zolotarev_tail_bound;

/// Relative tolerance of ψ2-norm comparisons.
pub const DEFAULT_NORM_TOL: f64 = 0.02;
/// Term tolerance of the MGF series.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
/// Series rows pass when the relative error is below this multiple of the
/// term tolerance.
pub const SERIES_PASS_FACTOR: f64 = 100.0;
/// Root tolerance for plug-in Orlicz norms.
pub const ORLICZ_ROOT_TOL: f64 = 1e-10;
/// Monte Carlo comparisons allow this many standard errors.
pub const STANDARD_ERRORS: f64 = 3.0;
/// Largest moment order accepted for empirical moments.
pub const MAX_EMPIRICAL_K: u32 = 8;
/// Relative identity tolerance for `sqrt(N) b(N) = ‖Z‖_{ψ2}`.
pub const IDENTITY_TOL: f64 = 1e-14;
/// Default number of random coefficient vectors per `verify` cell.
pub const DEFAULT_VECTORS: usize = 5;

/// Rounding allowance for comparisons that are exact in real arithmetic.
const ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Constants,
    Verify,
    Tightness,
    Moments,
    Tails,
    Series,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Constants,
        Experiment::Verify,
        Experiment::Tightness,
        Experiment::Moments,
        Experiment::Tails,
        Experiment::Series,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Constants => "constants",
            Experiment::Verify => "verify",
            Experiment::Tightness => "tightness",
            Experiment::Moments => "moments",
            Experiment::Tails => "tails",
            Experiment::Series => "series",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            Experiment::Constants => 0,
            Experiment::Verify => 1,
            Experiment::Tightness => 2,
            Experiment::Moments => 3,
            Experiment::Tails => 4,
            Experiment::Series => 5,
        }
    }

    /// Name of the parameter column.
    pub fn param_name(self) -> &'static str {
        match self {
            Experiment::Verify => "vector",
            Experiment::Moments => "k",
            Experiment::Tails => "t",
            Experiment::Series => "x",
            Experiment::Constants | Experiment::Tightness => "-",
        }
    }

    /// Extra columns appended after the common ones.
    pub fn extra_columns(self) -> &'static [&'static str] {
        match self {
            Experiment::Constants => &["sqrt_n_b", "gaussian_psi2"],
            Experiment::Verify => &["a_l2"],
            Experiment::Tightness => &["ratio"],
            Experiment::Moments => &["gaussian_moment", "std_error"],
            Experiment::Tails => &["std_error"],
            Experiment::Series => &["terms_used"],
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ConfigError(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Parameters shared by all experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dims: Vec<u32>,
    pub ns: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    /// `None` picks the experiment's default tolerance.
    pub tolerance: Option<f64>,
    pub k_max: u32,
    pub ts: Vec<f64>,
    pub xs: Vec<f64>,
    /// Random coefficient vectors per `verify` cell.
    pub vectors: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dims: vec![1, 2, 3, 4, 8],
            ns: vec![1, 2, 4, 16, 64, 256],
            samples: DEFAULT_SAMPLES,
            seed: 0,
            tolerance: None,
            k_max: 4,
            ts: vec![1.25, 1.5, 2.0],
            xs: vec![0.0, 0.1, 0.25],
            vectors: DEFAULT_VECTORS,
            format: Format::Csv,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn tolerance_for(&self, experiment: Experiment) -> f64 {
        self.tolerance.unwrap_or(match experiment {
            Experiment::Series => DEFAULT_SERIES_TOL,
            _ => DEFAULT_NORM_TOL,
        })
    }

    /// Checks the parts of the configuration that `experiment` reads.
    pub fn validate(&self, experiment: Experiment) -> Result<(), ConfigError> {
        let err = |msg: String| Err(ConfigError(msg));
        if self.dims.is_empty() {
            return err("dimension list is empty".into());
        }
        if let Some(d) = self.dims.iter().find(|&&d| d == 0 || d > 0xFFFF) {
            return err(format!("dimension {d} outside 1..=65535"));
        }
        let tol = self.tolerance_for(experiment);
        if !(tol > 0.0) || !tol.is_finite() {
            return err(format!("tolerance must be positive, got {tol}"));
        }
        let sampled = !matches!(experiment, Experiment::Constants | Experiment::Series);
        if sampled {
            if self.ns.is_empty() {
                return err("n list is empty".into());
            }
            if let Some(n) = self.ns.iter().find(|&&n| n == 0 || n > 0xFF_FFFF) {
                return err(format!("n = {n} outside 1..=16777215"));
            }
            if self.samples == 0 {
                return err("sample count must be at least 1".into());
            }
        }
        match experiment {
            Experiment::Verify if self.vectors == 0 || self.vectors > 0xFFFF => {
                err(format!("vector count {} outside 1..=65535", self.vectors))
            }
            Experiment::Moments if self.k_max > MAX_EMPIRICAL_K => err(format!(
                "k-max {} exceeds {MAX_EMPIRICAL_K} for empirical moments",
                self.k_max
            )),
            Experiment::Tails if self.ts.is_empty() => err("t grid is empty".into()),
            Experiment::Tails => match self.ts.iter().find(|t| !(**t >= 1.0) || !t.is_finite()) {
                Some(t) => err(format!("t = {t} outside [1, inf)")),
                None => Ok(()),
            },
            Experiment::Series => {
                for &d in &self.dims {
                    let half = 0.5 * f64::from(d);
                    if let Some(x) = self.xs.iter().find(|x| !(**x >= 0.0 && **x < half)) {
                        return err(format!("x = {x} outside [0, {half}) for N = {d}"));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn dimensions(&self) -> Vec<Dimension> {
        let mut dims = self.dims.clone();
        dims.sort_unstable();
        dims.dedup();
        dims.into_iter().filter_map(|d| Dimension::new(d).ok()).collect()
    }

    fn sizes(&self) -> Vec<usize> {
        let mut ns = self.ns.clone();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    fn stream(&self, experiment: Experiment, dim: Dimension, n: usize, slot: u64) -> RandomStream {
        RandomStream::new(self.seed, stream_index(experiment.stream_tag(), dim, n, slot))
    }
}

/// `tag:8 | N:16 | n:24 | slot:16`.
fn stream_index(tag: u64, dim: Dimension, n: usize, slot: u64) -> u64 {
    (tag << 56) | (u64::from(dim.get()) << 40) | ((n as u64) << 16) | slot
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub experiment: Experiment,
    pub dim: u32,
    pub n: Option<usize>,
    pub param: Option<f64>,
    pub measured: f64,
    pub reference: f64,
    pub slack: f64,
    pub pass: bool,
    /// Values of [`Experiment::extra_columns`], in order.
    pub extras: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: Experiment,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

/// Runs `experiment` after validating `config`.
pub fn run(experiment: Experiment, config: &ExperimentConfig) -> Result<Report, ConfigError> {
    config.validate(experiment)?;
    let rows = match experiment {
        Experiment::Constants => constants_rows(config),
        Experiment::Verify => verify_rows(config),
        Experiment::Tightness => tightness_rows(config),
        Experiment::Moments => moments_rows(config),
        Experiment::Tails => tails_rows(config),
        Experiment::Series => series_rows(config),
    };
    Ok(Report { experiment, rows })
}

pub fn run_constants(config: &ExperimentConfig) -> Result<Report, ConfigError> {
    run(Experiment::Constants, config)
}

pub fn run_verify(config: &ExperimentConfig) -> Result<Report, ConfigError> {
    run(Experiment::Verify, config)
}

pub fn run_tightness(config: &ExperimentConfig) -> Result<Report, ConfigError> {
    run(Experiment::Tightness, config)
}

pub fn run_moments(config: &ExperimentConfig) -> Result<Report, ConfigError> {
    run(Experiment::Moments, config)
}

pub fn run_tails(config: &ExperimentConfig) -> Result<Report, ConfigError> {
    run(Experiment::Tails, config)
}

pub fn run_series(config: &ExperimentConfig) -> Result<Report, ConfigError> {
    run(Experiment::Series, config)
}

fn constants_rows(config: &ExperimentConfig) -> Vec<ReportRow> {
    let limit = asymptotic_limit();
    let mut prev_gap = f64::INFINITY;
    config
        .dimensions()
        .into_iter()
        .map(|dim| {
            let b = best_constant(dim);
            let scaled = dim.as_f64().sqrt() * b;
            let gaussian = gaussian_psi2_norm_exact(dim);
            let gap = b - limit;
            let identity = ((scaled - gaussian) / gaussian).abs() <= IDENTITY_TOL;
            let pass = gap > 0.0 && gap < prev_gap && identity;
            prev_gap = gap;
            ReportRow {
                experiment: Experiment::Constants,
                dim: dim.get(),
                n: None,
                param: None,
                measured: b,
                reference: limit,
                slack: gap,
                pass,
                extras: vec![scaled, gaussian],
            }
        })
        .collect()
}

fn verify_rows(config: &ExperimentConfig) -> Vec<ReportRow> {
    let tol = config.tolerance_for(Experiment::Verify);
    let mut rows = Vec::new();
    for dim in config.dimensions() {
        let b = best_constant(dim);
        for n in config.sizes() {
            for r in 0..config.vectors as u64 {
                // even slots seed the coefficients, odd slots the samples
                let mut coeff_rng = config.stream(Experiment::Verify, dim, n, 2 * r).rng_at(0);
                let a = CoefficientVector::uniform_random(n, &mut coeff_rng)
                    .expect("n >= 1 and finite draws");
                let stream = config.stream(Experiment::Verify, dim, n, 2 * r + 1);
                let kind = SampleKind::weighted_sum(a.clone(), dim);
                let batch = collect_batch(&kind, config.samples, &stream).expect("samples >= 1");
                let estimate = empirical_orlicz_norm(&batch, YoungExponent::PSI2, ORLICZ_ROOT_TOL)
                    .expect("valid tolerance")
                    .value;
                let bound = b * a.l2_norm();
                rows.push(ReportRow {
                    experiment: Experiment::Verify,
                    dim: dim.get(),
                    n: Some(n),
                    param: Some(r as f64),
                    measured: estimate,
                    reference: bound,
                    slack: bound - estimate,
                    pass: estimate <= bound * (1.0 + tol),
                    extras: vec![a.l2_norm()],
                });
            }
        }
    }
    rows
}

fn yn_batch(
    config: &ExperimentConfig,
    experiment: Experiment,
    dim: Dimension,
    n: usize,
) -> crate::orlicz::SampleBatch {
    let kind = SampleKind::normalized_sum(n, dim).expect("n >= 1");
    collect_batch(&kind, config.samples, &config.stream(experiment, dim, n, 0))
        .expect("samples >= 1")
}

fn tightness_rows(config: &ExperimentConfig) -> Vec<ReportRow> {
    let tol = config.tolerance_for(Experiment::Tightness);
    let mut rows = Vec::new();
    for dim in config.dimensions() {
        let b = best_constant(dim);
        for n in config.sizes() {
            let batch = yn_batch(config, Experiment::Tightness, dim, n);
            let estimate = empirical_orlicz_norm(&batch, YoungExponent::PSI2, ORLICZ_ROOT_TOL)
                .expect("valid tolerance")
                .value;
            let ratio = estimate / b;
            rows.push(ReportRow {
                experiment: Experiment::Tightness,
                dim: dim.get(),
                n: Some(n),
                param: None,
                measured: estimate,
                reference: b,
                slack: b - estimate,
                pass: ratio <= 1.0 + tol,
                extras: vec![ratio],
            });
        }
    }
    rows
}

fn moments_rows(config: &ExperimentConfig) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for dim in config.dimensions() {
        let variance = 1.0 / dim.as_f64();
        for n in config.sizes() {
            let a = CoefficientVector::normalized_ones(n).expect("n >= 1");
            let batch = yn_batch(config, Experiment::Moments, dim, n);
            for k in 0..=config.k_max {
                let k = MomentOrder(k);
                let (mean, se) = moment_with_error(&batch, k);
                let bound = kk_upper_bound(dim, k, a.as_slice());
                let gaussian = gaussian_even_moment(dim, k, variance).expect("positive variance");
                let allowed = bound + STANDARD_ERRORS * se + ROUNDING * bound;
                rows.push(ReportRow {
                    experiment: Experiment::Moments,
                    dim: dim.get(),
                    n: Some(n),
                    param: Some(f64::from(k.get())),
                    measured: mean,
                    reference: bound,
                    slack: bound - mean,
                    pass: mean <= allowed,
                    extras: vec![gaussian, se],
                });
            }
        }
    }
    rows
}

fn tails_rows(config: &ExperimentConfig) -> Vec<ReportRow> {
    let mut ts = config.ts.clone();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let m = config.samples as f64;
    let mut rows = Vec::new();
    for dim in config.dimensions() {
        for n in config.sizes() {
            let batch = yn_batch(config, Experiment::Tails, dim, n);
            for &t in &ts {
                let tail = empirical_tail(&batch, t).expect("t >= 1");
                let bound = zolotarev_tail_bound(dim, t).expect("t >= 1");
                let se = (bound * (1.0 - bound) / m).sqrt();
                rows.push(ReportRow {
                    experiment: Experiment::Tails,
                    dim: dim.get(),
                    n: Some(n),
                    param: Some(t),
                    measured: tail,
                    reference: bound,
                    slack: bound - tail,
                    pass: tail <= bound + STANDARD_ERRORS * se,
                    extras: vec![se],
                });
            }
        }
    }
    rows
}

fn series_rows(config: &ExperimentConfig) -> Vec<ReportRow> {
    let tol = config.tolerance_for(Experiment::Series);
    let mut rows = Vec::new();
    for dim in config.dimensions() {
        let distinguished = best_constant(dim).powi(-2);
        let mut xs: Vec<f64> = config.xs.clone();
        xs.push(distinguished);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        for x in xs {
            let series = mgf_series(dim, x, tol, DEFAULT_MAX_TERMS).expect("validated x");
            let reference = if x == distinguished {
                2.0
            } else {
                mgf_closed_form(dim, x).expect("validated x")
            };
            let diff = series.value - reference;
            rows.push(ReportRow {
                experiment: Experiment::Series,
                dim: dim.get(),
                n: None,
                param: Some(x),
                measured: series.value,
                reference,
                slack: diff,
                pass: series.converged && diff.abs() <= SERIES_PASS_FACTOR * tol * reference,
                extras: vec![series.terms_used as f64],
            });
        }
    }
    rows
}
