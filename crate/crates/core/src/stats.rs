//! Empirical distributions and goodness-of-fit summaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Empirical cdf of a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

pub fn ecdf(samples: &[f64]) -> Result<Ecdf> {
    check_finite(samples)?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(Ecdf { sorted })
}

impl Ecdf {
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// `#{x_i <= t} / n`.
    pub fn eval(&self, t: f64) -> f64 {
        let below = self.sorted.partition_point(|&x| x <= t);
        below as f64 / self.sorted.len() as f64
    }

    /// `#{x_i < t} / n`, the left limit at `t`.
    pub fn eval_left(&self, t: f64) -> f64 {
        let below = self.sorted.partition_point(|&x| x < t);
        below as f64 / self.sorted.len() as f64
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }
}

fn check_finite(samples: &[f64]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some((index, &value)) = samples.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::BadSample {
            index,
            value,
            reason: "not finite",
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    /// `D_n = sup_t |F_n(t) - F(t)|`.
    pub ks_statistic: f64,
    pub n: usize,
    /// Asymptotic p-value `P(K > sqrt(n) D_n)`.
    pub p_value: f64,
    pub censored_fraction: f64,
}

impl GofReport {
    pub fn with_censored_fraction(mut self, censored_fraction: f64) -> Self {
        self.censored_fraction = censored_fraction;
        self
    }
}

/// One-sample Kolmogorov–Smirnov statistic against a continuous `cdf`.
///
/// At each distinct sample value `x` both one-sided gaps
/// `F_n(x) - F(x)` and `F(x) - F_n(x-)` are checked, which handles ties.
pub fn ks_statistic<F>(samples: &[f64], cdf: F) -> Result<GofReport>
where
    F: Fn(f64) -> f64,
{
    let e = ecdf(samples)?;
    let n = e.len();
    let nf = n as f64;
    let sorted = e.sorted();
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < n {
        let x = sorted[i];
        let mut j = i;
        while j < n && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        d = d.max(j as f64 / nf - f).max(f - i as f64 / nf);
        i = j;
    }
    Ok(GofReport {
        ks_statistic: d,
        n,
        p_value: kolmogorov_survival(nf.sqrt() * d),
        censored_fraction: 0.0,
    })
}

/// `P(K > x)` for the Kolmogorov distribution.
///
/// Uses `2 Σ (-1)^{k-1} e^{-2k²x²}` for `x >= 1`, where it converges in a
/// handful of terms, and the theta-function dual
/// `1 - sqrt(2π)/x Σ e^{-(2k-1)²π²/(8x²)}` below it. Both series are cut
/// once a term drops under `1e-12`.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let p = if x >= 1.0 {
        let mut sum = 0.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * x * x).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-12 {
                break;
            }
        }
        2.0 * sum
    } else {
        let mut sum = 0.0;
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * x * x);
        for k in 1..=100 {
            let odd = (2 * k - 1) as f64;
            let term = (-odd * odd * c).exp();
            sum += term;
            if term < 1e-12 {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * sum
    };
    p.clamp(0.0, 1.0)
}

/// Sample mean and its standard error `s / sqrt(n)`.
pub fn mean_se(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    check_finite(samples)?;
    // Accumulate in sorted order so permutations give identical bits.
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let ss: f64 = sorted.iter().map(|x| (x - mean) * (x - mean)).sum();
    let var = ss / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Exponential rate estimate `1 / mean` with delta-method standard error
/// `rate / sqrt(n)`.
pub fn rate_mle(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    if let Some((index, &value)) = samples.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
        return Err(Error::BadSample {
            index,
            value,
            reason: "exponential samples must be positive",
        });
    }
    let (mean, _) = mean_se(samples)?;
    let rate = 1.0 / mean;
    Ok((rate, rate / (samples.len() as f64).sqrt()))
}

/// Fraction of `flags` that are set, 0 for an empty slice.
pub fn fraction(flags: impl IntoIterator<Item = bool>) -> f64 {
    let (hits, total) = flags
        .into_iter()
        .fold((0u64, 0u64), |(h, t), f| (h + f as u64, t + 1));
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

/// Bernoulli proportion with standard error `sqrt(p(1-p)/n)`.
pub fn proportion_se(hits: u64, n: u64) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}
