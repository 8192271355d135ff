//! Closed-form quantities: the best constant `b(N)`, the even-moment
//! Khintchine constants for sphere-valued variables, the moment generating
//! function `f(x) = (1 - 2x/N)^{-N/2}` and its Taylor series, and the
//! Gaussian comparison norms and moments.
//!
//! Gamma ratios `Γ(k + N/2) / Γ(N/2)` are always evaluated as the log-space
//! sum `Σ_{m<k} ln(N/2 + m)`, so nothing overflows for large `k`.

use std::f64::consts::LN_2;
use std::fmt;

use crate::error::{Error, Result};

/// Ambient dimension `N` of the sphere `S^{N-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(value: u32) -> Result<Self> {
        if value == 0 {
            return Err(Error::domain("dimension", "N must be at least 1"));
        }
        Ok(Dimension(value))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    #[inline]
    fn half(self) -> f64 {
        0.5 * self.as_f64()
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;

    fn try_from(value: u32) -> Result<Self> {
        Dimension::new(value)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Half of an even moment order: `p = 2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MomentOrder(pub u32);

impl MomentOrder {
    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl From<u32> for MomentOrder {
    fn from(k: u32) -> Self {
        MomentOrder(k)
    }
}

/// Outcome of a truncated power-series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub converged: bool,
    pub last_term: f64,
}

/// Default cap on the number of series terms.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// `ln(Γ(k + N/2) / Γ(N/2))`, exactly 0 for `k = 0`.
pub fn log_gamma_ratio(dim: Dimension, k: MomentOrder) -> f64 {
    let half = dim.half();
    (0..k.get()).map(|m| (half + f64::from(m)).ln()).sum()
}

/// `b̃(2k)^{2k} = (2/N)^k Γ(k + N/2) / Γ(N/2)`, the optimal constant of the
/// `L_{2k}` Khintchine inequality for uniform variables on `S^{N-1}`.
pub fn kk_even_moment_constant(dim: Dimension, k: MomentOrder) -> f64 {
    match k.get() {
        0 | 1 => 1.0,
        _ => {
            let half = dim.half();
            // each factor (N/2 + m) / (N/2) stays near 1 for small k
            let log = (0..k.get())
                .map(|m| (f64::from(m) / half).ln_1p())
                .sum::<f64>();
            log.exp()
        }
    }
}

/// The best constant `b(N) = sqrt(2/N) / sqrt(1 - 2^{-2/N})`.
pub fn best_constant(dim: Dimension) -> f64 {
    let n = dim.as_f64();
    (2.0 / n / one_minus_half_pow(dim)).sqrt()
}

/// `lim_{N→∞} b(N) = 1 / sqrt(ln 2)`.
pub fn asymptotic_limit() -> f64 {
    1.0 / LN_2.sqrt()
}

/// `‖Z‖_{ψ2}` for a standard Gaussian vector in `R^N`:
/// `sqrt(2) / sqrt(1 - 2^{-2/N})`.
pub fn gaussian_psi2_norm_exact(dim: Dimension) -> f64 {
    (2.0 / one_minus_half_pow(dim)).sqrt()
}

/// `1 - (1/2)^{2/N}` without cancellation for large `N`.
fn one_minus_half_pow(dim: Dimension) -> f64 {
    -(-2.0 * LN_2 / dim.as_f64()).exp_m1()
}

/// `E‖Z‖^{2k}` for `Z ~ N(0, σ² I_N)`: `(2σ²)^k Γ(N/2 + k) / Γ(N/2)`.
pub fn gaussian_even_moment(dim: Dimension, k: MomentOrder, variance_scale: f64) -> Result<f64> {
    if !(variance_scale > 0.0) || !variance_scale.is_finite() {
        return Err(Error::domain(
            "variance_scale",
            format!("must be positive and finite, got {variance_scale}"),
        ));
    }
    let kf = f64::from(k.get());
    Ok((kf * (2.0 * variance_scale).ln() + log_gamma_ratio(dim, k)).exp())
}

/// Right-hand side of the even-moment Khintchine inequality:
/// `b̃(2k)^{2k} · (Σ a_j²)^k`.
pub fn kk_upper_bound(dim: Dimension, k: MomentOrder, coefficients: &[f64]) -> f64 {
    let sum_sq: f64 = coefficients.iter().map(|a| a * a).sum();
    kk_even_moment_constant(dim, k) * sum_sq.powi(k.get() as i32)
}

/// `f(x) = (1 - 2x/N)^{-N/2}`, the moment generating function bound.
pub fn mgf_closed_form(dim: Dimension, x: f64) -> Result<f64> {
    check_mgf_domain(dim, x)?;
    let half = dim.half();
    Ok((-half * (-x / half).ln_1p()).exp())
}

fn check_mgf_domain(dim: Dimension, x: f64) -> Result<()> {
    if x.is_nan() || x >= dim.half() {
        return Err(Error::domain(
            "x",
            format!("must be below N/2 = {}, got {x}", dim.half()),
        ));
    }
    Ok(())
}

/// Taylor series of `f` at 0, `Σ_k x^k (2/N)^k Γ(k+N/2) / (k! Γ(N/2))`,
/// summed in increasing `k` with each term built in log space.
///
/// Stops once the last term and an upper bound on the geometric tail are
/// both below `tol · max(1, value)`. When `max_terms` runs out first the
/// result is returned with `converged = false`.
pub fn mgf_series(dim: Dimension, x: f64, tol: f64, max_terms: usize) -> Result<SeriesResult> {
    if !(x >= 0.0) {
        return Err(Error::domain("x", format!("must be nonnegative, got {x}")));
    }
    check_mgf_domain(dim, x)?;
    if !(tol > 0.0) {
        return Err(Error::domain("tol", format!("must be positive, got {tol}")));
    }
    if max_terms == 0 {
        return Err(Error::domain("max_terms", "must be at least 1"));
    }

    let half = dim.half();
    let limit_ratio = x / half;
    let mut value = 1.0;
    let mut last_term = 1.0;
    if x == 0.0 {
        return Ok(SeriesResult {
            value,
            terms_used: 1,
            converged: true,
            last_term: 0.0,
        });
    }

    let ln_scaled_x = (x / half).ln();
    let mut log_term = 0.0;
    for k in 1..max_terms {
        let kf = k as f64;
        // term_k = term_{k-1} · (x/(N/2)) · (N/2 + k - 1) / k
        log_term += ln_scaled_x + (half + kf - 1.0).ln() - kf.ln();
        let term = log_term.exp();
        value += term;
        let ratio = limit_ratio * (half + kf) / (kf + 1.0);
        let tail_ratio = ratio.max(limit_ratio);
        let scale = tol * value.max(1.0);
        let tail = term * tail_ratio / (1.0 - tail_ratio);
        last_term = term;
        if ratio < 1.0 && term <= scale && tail <= scale {
            return Ok(SeriesResult {
                value,
                terms_used: k + 1,
                converged: true,
                last_term: term,
            });
        }
    }
    Ok(SeriesResult {
        value,
        terms_used: max_terms,
        converged: false,
        last_term,
    })
}
