//! The borderline-regime constant `alpha(gamma)` and the series solution
//! `u(x)` of `(1 - x) u'' = gamma u`, `u(0) = 1`, `u(1) = 0`.
//!
//! With `a_k = gamma^k / (k! (k-1)!)` and `y = 1 - x`:
//!
//! ```text
//! u(x)  =  c Σ a_k y^k              c = 1 / Σ a_k
//! alpha = -u'(0) = Σ k a_k / Σ a_k
//! ```

use crate::error::{Error, Result};

const MAX_TERMS: usize = 500;
const REL_CUTOFF: f64 = 1e-16;

/// `(Σ a_k y^k, Σ k a_k y^{k-1}, Σ k(k-1) a_k y^{k-2})`.
///
/// Terms are summed until each new term is below `1e-16` of its partial
/// sum, or 500 terms.
fn power_sums(gamma: f64, y: f64) -> (f64, f64, f64) {
    // k = 1
    let mut s0 = gamma * y;
    let mut s1 = gamma;
    let mut s2 = 0.0;
    // b = a_k y^{k-2}, starting at k = 2
    let mut b = gamma * gamma / 2.0;
    for k in 2..=MAX_TERMS {
        let kf = k as f64;
        let t0 = b * y * y;
        let t1 = kf * b * y;
        let t2 = kf * (kf - 1.0) * b;
        s0 += t0;
        s1 += t1;
        s2 += t2;
        if t0 <= REL_CUTOFF * s0.abs() && t1 <= REL_CUTOFF * s1.abs() && t2 <= REL_CUTOFF * s2.abs()
        {
            break;
        }
        b *= gamma * y / ((kf + 1.0) * kf);
    }
    (s0, s1, s2)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::invalid("gamma", format!("{gamma} must be positive")));
    }
    Ok(())
}

/// `Σ γ^k/((k-1)!)^2 / Σ γ^k/(k!(k-1)!)`.
pub fn alpha(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let (s0, s1, _) = power_sums(gamma, 1.0);
    Ok(s1 / s0)
}

/// Value and first two derivatives of `u` at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub u: f64,
    pub du: f64,
    pub d2u: f64,
}

pub fn u_series_derivatives(x: f64, gamma: f64) -> Result<SeriesPoint> {
    check_gamma(gamma)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid("x", format!("{x} must lie in [0, 1]")));
    }
    let (norm, _, _) = power_sums(gamma, 1.0);
    let (s0, s1, s2) = power_sums(gamma, 1.0 - x);
    Ok(SeriesPoint {
        u: s0 / norm,
        du: -s1 / norm,
        d2u: s2 / norm,
    })
}

/// Probability-scale solution `u(x)`; strictly decreasing from 1 to 0.
pub fn u_series(x: f64, gamma: f64) -> Result<f64> {
    Ok(u_series_derivatives(x, gamma)?.u)
}
