//! Tail estimates behind the uniform integrability of
//! `exp(‖Y_n‖² / C²)`: the exponent `q(t) = (t² - ln t - 1)/2`, the bound
//! `P(‖Y_n‖ > t) <= exp(-N q(t))`, the threshold past which
//! `t² - ln t - 1 > γ t²`, and the closed form of the integral bounding
//! `I(p) = sup_n E exp(p ‖Y_n‖² / C²)`.

use crate::analytic::Dimension;
use crate::error::{Error, Result};
use crate::roots::bisect;

/// Default tolerance for [`gamma_threshold`].
pub const DEFAULT_THRESHOLD_TOL: f64 = 1e-10;

/// `γ ∈ (1/2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GammaParameter(f64);

impl GammaParameter {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.5 && gamma < 1.0) {
            return Err(Error::domain("gamma", format!("must lie in (1/2, 1), got {gamma}")));
        }
        Ok(GammaParameter(gamma))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Inputs of the `I(p)` bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpBoundInputs {
    dim: Dimension,
    c: f64,
    gamma: GammaParameter,
    p: f64,
}

impl IpBoundInputs {
    pub fn new(dim: Dimension, c: f64, gamma: GammaParameter, p: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::domain("C", format!("must be positive, got {c}")));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::domain("p", format!("must exceed 1, got {p}")));
        }
        Ok(IpBoundInputs { dim, c, gamma, p })
    }

    /// `α = N C² γ / (2p)`, the decay exponent of the integrand `t^{-α}`.
    pub fn alpha(&self) -> f64 {
        self.dim.as_f64() * self.c * self.c * self.gamma.get() / (2.0 * self.p)
    }

    /// Supremum of admissible `p`: `N C² γ / 2`.
    pub fn p_upper(&self) -> f64 {
        self.dim.as_f64() * self.c * self.c * self.gamma.get() / 2.0
    }
}

/// `q(t) = (t² - ln t - 1) / 2`.
pub fn zolotarev_exponent(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("t", format!("must be positive, got {t}")));
    }
    Ok(0.5 * (t * t - t.ln() - 1.0))
}

/// `exp(-N q(t))` for `t >= 1`. Below 1 the exponent can be negative and the
/// bound is vacuous, so those arguments are rejected.
pub fn zolotarev_tail_bound(dim: Dimension, t: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::domain("t", format!("tail bound needs t >= 1, got {t}")));
    }
    Ok((-dim.as_f64() * zolotarev_exponent(t)?).exp())
}

/// The root `t* > 1` of `(1 - γ) t² = ln t + 1`; for `t > t*` the inequality
/// `t² - ln t - 1 > γ t²` holds.
///
/// Returns the upper end of a bisection bracket of width at most `tol`, so
/// every `t >= t*` returned satisfies the strict inequality up to `tol`.
pub fn gamma_threshold(gamma: GammaParameter, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain("tol", format!("must be positive, got {tol}")));
    }
    let slack = |t: f64| (1.0 - gamma.get()) * t * t - t.ln() - 1.0;
    // slack(1) = -γ < 0; slack is eventually increasing
    let mut hi = 100.0;
    while slack(hi) <= 0.0 {
        hi *= 2.0;
    }
    let bracket = bisect(1.0, hi, tol, |t| slack(t) <= 0.0);
    Ok(bracket.hi)
}

/// `1 + ∫_1^∞ t^{-α} dt = 1 + 1/(α - 1)`, finite only for `α > 1`.
pub fn ip_bound(inputs: &IpBoundInputs) -> Result<f64> {
    let alpha = inputs.alpha();
    if !(alpha > 1.0) {
        return Err(Error::Divergent { alpha });
    }
    Ok(1.0 + 1.0 / (alpha - 1.0))
}
