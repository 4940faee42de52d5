use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed-form expectations for the neutral two-type Moran chain started
/// from one type 1 individual, at level `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct M0Expectations {
    /// `E[R_k] = 2(N-k)/N`.
    pub er_k: f64,
    /// `E[R_k | type 1 lost] = 2(N-k)^2 / (N(N-1))`.
    pub er_k_given_loss: f64,
    /// `E[R_k | type 1 fixes] = 2k(N-k)/N`.
    pub er_k_given_fix: f64,
    /// `E[L_k] = 1/k`.
    pub el_k: f64,
    /// `E[T] = Σ_{i=1}^{N-1} 1/i`.
    pub et: f64,
}

pub fn m0_expectations(n: u64, k: u64) -> Result<M0Expectations> {
    if n < 2 {
        return Err(Error::invalid(
            "N",
            format!("population size {n} must be at least 2"),
        ));
    }
    if k == 0 || k >= n {
        return Err(Error::invalid("k", format!("level {k} must lie in 1..{n}")));
    }
    let nf = n as f64;
    let kf = k as f64;
    let rest = nf - kf;
    Ok(M0Expectations {
        er_k: 2.0 * rest / nf,
        er_k_given_loss: 2.0 * rest * rest / (nf * (nf - 1.0)),
        er_k_given_fix: 2.0 * kf * rest / nf,
        el_k: 1.0 / kf,
        et: harmonic(n - 1),
    })
}

/// Absorption probability at `N` from `j0` type 1 individuals.
pub fn m0_fixation_probability(n: u64, j0: u64) -> f64 {
    j0 as f64 / n as f64
}

fn harmonic(n: u64) -> f64 {
    // smallest terms first
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}
