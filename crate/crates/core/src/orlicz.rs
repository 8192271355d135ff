//! Young functions `ψ_q(x) = exp(x^q) - 1` and Orlicz norms
//! `‖X‖_{ψ_q} = inf{c > 0 : E ψ_q(|X|/c) <= 1}`.
//!
//! For sample batches the expectation is replaced by the batch mean (the
//! plug-in estimator). It is biased low for heavy-tailed `ψ_q(|X|/c)`, and no
//! correction is attempted.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::roots::bisect;

/// Exponent `q > 0` of the Young function `ψ_q`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct YoungExponent(f64);

impl YoungExponent {
    pub const PSI2: YoungExponent = YoungExponent(2.0);

    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::domain("q", format!("must be positive, got {q}")));
        }
        Ok(YoungExponent(q))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    fn eval_unchecked(self, x: f64) -> f64 {
        if self.0 == 2.0 {
            (x * x).exp_m1()
        } else {
            x.powf(self.0).exp_m1()
        }
    }
}

/// A nonempty batch of nonnegative realizations of a norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    values: Vec<f64>,
}

impl SampleBatch {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("batch", "must contain at least one sample"));
        }
        if let Some(bad) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::domain(
                "batch",
                format!("samples must be finite and nonnegative, found {bad}"),
            ));
        }
        Ok(SampleBatch { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Multiplies every sample by `factor >= 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        SampleBatch::new(self.values.iter().map(|v| v * factor).collect())
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Writes one decimal value per line, round-trip exact.
    pub fn write_lines<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        for v in &self.values {
            writeln!(out, "{v:?}")?;
        }
        Ok(())
    }

    /// Parses the format produced by [`SampleBatch::write_lines`]; blank
    /// lines are skipped.
    pub fn read_lines<R: std::io::BufRead>(input: R) -> std::io::Result<Self> {
        let mut values = Vec::new();
        for line in input.lines() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let v = trimmed.parse::<f64>().map_err(|e| {
                std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{trimmed:?}: {e}"))
            })?;
            values.push(v);
        }
        SampleBatch::new(values)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))
    }
}

/// Numerical solution of the Orlicz-norm equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrliczEstimate {
    pub value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: u32,
}

/// `ψ_q(x)`.
pub fn young(q: YoungExponent, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("x", format!("must be nonnegative, got {x}")));
    }
    Ok(q.eval_unchecked(x))
}

const CHUNK: usize = 1 << 14;

/// `mean_i ψ_q(s_i / c)`; `+∞` once any term overflows.
///
/// Chunk sums are combined in a fixed order so the result does not depend on
/// the thread count.
pub fn empirical_young_mean(batch: &SampleBatch, q: YoungExponent, c: f64) -> f64 {
    let inv = 1.0 / c;
    let partial: Vec<f64> = batch
        .values
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(|s| q.eval_unchecked(s * inv)).sum::<f64>())
        .collect();
    partial.iter().sum::<f64>() / batch.len() as f64
}

/// Plug-in Orlicz norm of a batch: the root `c` of `mean ψ_q(s_i/c) = 1`.
///
/// The bracket is found by halving down from `max s / (ln 2)^{1/q}`, where
/// the mean is at most 1, and then refined by bisection until its width is
/// at most `tol · max(1, c)`.
pub fn empirical_orlicz_norm(batch: &SampleBatch, q: YoungExponent, tol: f64) -> Result<OrliczEstimate> {
    if !(tol > 0.0) {
        return Err(Error::domain("tol", format!("must be positive, got {tol}")));
    }
    let max = batch.max();
    if max == 0.0 {
        return Ok(OrliczEstimate {
            value: 0.0,
            bracket_lo: 0.0,
            bracket_hi: 0.0,
            iterations: 0,
        });
    }

    let above_one = |c: f64| empirical_young_mean(batch, q, c) > 1.0;
    let mut hi = exact_orlicz_norm_constant(max, q)?;
    let mut iterations = 0;
    // rounding can leave the mean a few ulps above 1 at the analytic bound
    while above_one(hi) {
        hi *= 1.0 + 1e-12;
        iterations += 1;
    }
    let mut lo = 0.5 * hi;
    while !above_one(lo) {
        hi = lo;
        lo *= 0.5;
        iterations += 1;
    }
    let bracket = bisect(lo, hi, tol, above_one);
    Ok(OrliczEstimate {
        value: 0.5 * (bracket.lo + bracket.hi),
        bracket_lo: bracket.lo,
        bracket_hi: bracket.hi,
        iterations: iterations + bracket.iterations,
    })
}

/// `‖s‖_{ψ_q}` of the constant random variable `s`: `s / (ln 2)^{1/q}`.
pub fn exact_orlicz_norm_constant(s: f64, q: YoungExponent) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain("s", format!("must be nonnegative, got {s}")));
    }
    Ok(s / std::f64::consts::LN_2.powf(1.0 / q.get()))
}
