//! Type 2 waiting time in the branching approximation for two stages.
//!
//! `g2(t)` is the probability that a single type 1 founder of a critical
//! binary branching process has produced a type 2 mutation by time `t`. It
//! solves `g' = -u2 g - g^2 + u2`, `g(0) = 0`, whose fixed points are the
//! roots of `x^2 + u2 x - u2`.

use serde::{Deserialize, Serialize};

use super::quad::{adaptive_simpson, DEFAULT_ABS_TOL, DEFAULT_MAX_DEPTH};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiccatiRoots {
    /// Positive root; the eventual type 2 probability.
    pub r1: f64,
    pub r2: f64,
}

impl RiccatiRoots {
    /// Relative residuals of `r1 + r2 = -u2` (scaled by the largest of
    /// `|r1|, |r2|, u2`) and `r1 r2 = -u2` (scaled by `u2`).
    pub fn vieta_residuals(&self, u2: f64) -> (f64, f64) {
        let scale = self.r1.abs().max(self.r2.abs()).max(u2);
        let sum = (self.r1 + self.r2 + u2).abs() / scale;
        let product = (self.r1 * self.r2 + u2).abs() / u2;
        (sum, product)
    }
}

/// Roots of `x^2 + u2 x - u2 = 0`.
///
/// `r1` is evaluated as `2 u2 / (u2 + sqrt(u2^2 + 4 u2))`, which has no
/// cancellation as `u2 -> 0`.
pub fn riccati_roots(u2: f64) -> Result<RiccatiRoots> {
    if !(u2 > 0.0) || !u2.is_finite() {
        return Err(Error::invalid("u2", format!("{u2} must be positive")));
    }
    let disc = (u2 * u2 + 4.0 * u2).sqrt();
    let r1 = 2.0 * u2 / (u2 + disc);
    Ok(RiccatiRoots { r1, r2: -u2 - r1 })
}

/// `g2(t) = r1 (1 - e^{(r2-r1)t}) / (1 - (r1/r2) e^{(r2-r1)t})`.
pub fn g2(t: f64, u2: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::invalid("t", format!("{t} must be >= 0")));
    }
    let RiccatiRoots { r1, r2 } = riccati_roots(u2)?;
    Ok(g2_with_roots(t, r1, r2))
}

fn g2_with_roots(t: f64, r1: f64, r2: f64) -> f64 {
    let exponent = (r2 - r1) * t;
    // exp underflows to 0 for large t, leaving exactly r1
    let e = exponent.exp();
    r1 * -exponent.exp_m1() / (1.0 - (r1 / r2) * e)
}

/// Time after which `g2` equals `r1` to double precision.
fn saturation_time(r1: f64, r2: f64) -> f64 {
    40.0 / (r1 - r2)
}

/// `1 - exp(-immigration_rate ∫_0^t g2(s) ds)`: the first type 2 time when
/// type 1 founders arrive as a Poisson process of rate `immigration_rate`.
///
/// The integral is done by adaptive Simpson up to the saturation time of
/// `g2`; beyond it the integrand is the constant `r1`.
pub fn tau2_cdf_immigration(t: f64, immigration_rate: f64, u2: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::invalid("t", format!("{t} must be >= 0")));
    }
    if !(immigration_rate >= 0.0) || !immigration_rate.is_finite() {
        return Err(Error::invalid(
            "immigration_rate",
            format!("{immigration_rate} must be >= 0"),
        ));
    }
    let RiccatiRoots { r1, r2 } = riccati_roots(u2)?;
    if t == 0.0 || immigration_rate == 0.0 {
        return Ok(0.0);
    }
    if t.is_infinite() {
        return Ok(1.0);
    }
    let t_sat = saturation_time(r1, r2);
    let head = t.min(t_sat);
    let mut integral = adaptive_simpson(
        |s| g2_with_roots(s, r1, r2),
        0.0,
        head,
        DEFAULT_ABS_TOL,
        DEFAULT_MAX_DEPTH,
    )?;
    if t > t_sat {
        integral += r1 * (t - t_sat);
    }
    Ok(-(-immigration_rate * integral).exp_m1())
}
