//! Model parameters, simulator state and the scaling constants `r_{j,m}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-individual mutation rates `u_1..u_m`; `u_j` is the rate at which a
/// type `j - 1` individual becomes type `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutationRates {
    u: Vec<f64>,
}

impl MutationRates {
    pub fn new(u: Vec<f64>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::invalid(
                "u",
                "at least one mutation stage is required",
            ));
        }
        for (i, &rate) in u.iter().enumerate() {
            if !rate.is_finite() || !(0.0..1.0).contains(&rate) {
                return Err(Error::invalid(
                    format!("u{}", i + 1),
                    format!("rate {rate} must satisfy 0 <= u < 1"),
                ));
            }
        }
        Ok(Self { u })
    }

    /// Number of stages `m`.
    pub fn m(&self) -> usize {
        self.u.len()
    }

    /// Rate `u_j` for `1 <= j <= m`.
    pub fn u(&self, j: usize) -> f64 {
        assert!((1..=self.m()).contains(&j), "stage {j} out of range");
        self.u[j - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.u
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationParams {
    pub n: u64,
    pub rates: MutationRates,
}

impl PopulationParams {
    pub fn new(n: u64, rates: MutationRates) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(
                "N",
                format!("population size {n} must be at least 2"),
            ));
        }
        Ok(Self { n, rates })
    }

    pub fn m(&self) -> usize {
        self.rates.m()
    }
}

/// Number of individuals of each type `0..=m`. Always sums to `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCounts {
    x: Vec<u64>,
}

impl TypeCounts {
    /// All `n` individuals of type 0.
    pub fn wild_type(n: u64, m: usize) -> Self {
        let mut x = vec![0; m + 1];
        x[0] = n;
        Self { x }
    }

    /// One type `j` individual among `n - 1` of type 0.
    pub fn single_mutant(n: u64, m: usize, j: usize) -> Self {
        let mut counts = Self::wild_type(n, m);
        counts.x[0] -= 1;
        counts.x[j] += 1;
        counts
    }

    pub fn total(&self) -> u64 {
        self.x.iter().sum()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.x
    }

    pub fn get(&self, j: usize) -> u64 {
        self.x[j]
    }

    /// Moves one individual from type `from` to type `to`.
    #[inline]
    pub fn transfer(&mut self, from: usize, to: usize) {
        debug_assert!(self.x[from] > 0, "no type {from} individual to move");
        self.x[from] -= 1;
        self.x[to] += 1;
    }
}

/// The constants `r_{0,m}, .., r_{m,m}`.
///
/// `r_{j,m}` approximates the probability that a single type `j` individual
/// ever has a type `m` descendant; `1 / (N r_{0,m})` is the waiting-time scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConstants {
    r: Vec<f64>,
}

impl ScalingConstants {
    pub fn get(&self, j: usize) -> f64 {
        self.r[j]
    }

    pub fn r0(&self) -> f64 {
        self.r[0]
    }

    pub fn r1(&self) -> f64 {
        self.r[1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.r
    }
}

/// Backward recursion `r_{m,m} = 1`, `r_{j,m} = sqrt(u_{j+1} r_{j+1,m})`,
/// `r_{0,m} = u_1 r_{1,m}`.
///
/// Square roots of each step keep `r_j^2 = u_{j+1} r_{j+1}` exact to
/// round-off, which the product of fractional powers does not.
pub fn scaling_constants(rates: &MutationRates) -> ScalingConstants {
    let m = rates.m();
    let mut r = vec![0.0; m + 1];
    r[m] = 1.0;
    for j in (1..m).rev() {
        r[j] = (rates.u(j + 1) * r[j + 1]).sqrt();
    }
    r[0] = rates.u(1) * r[1];
    ScalingConstants { r }
}

/// Cutoffs used to classify a parameter set. Advisory only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    /// Largest `N u_1` treated as "small".
    pub lambda_max: f64,
    /// Smallest `N r_{1,m}` treated as "large".
    pub s_min: f64,
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    /// `N r_{1,m}` at or below this means fixation of type 1 comes first.
    pub s_fix: f64,
    /// Lower bound on successive rate ratios `u_{j+1} / u_j`.
    pub ratio_floor: f64,
    /// Exponent `a` in the check `N^a u_m <= 1`.
    pub rate_exponent: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            lambda_max: 0.2,
            s_min: 5.0,
            gamma_lo: 0.1,
            gamma_hi: 10.0,
            s_fix: 0.1,
            ratio_floor: 0.01,
            rate_exponent: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Stochastic tunneling: `N u_1` small and `N r_{1,m}` large.
    Theorem2,
    /// `(N r_{1,m})^2` of order one.
    Theorem3Borderline,
    FixationDominated,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub lambda_hat: f64,
    pub tunneling_strength: f64,
    pub gamma_hat: f64,
    pub classification: Regime,
    /// `N u_1 <= lambda_max`.
    pub small_initiation: bool,
    /// Every `u_{j+1} / u_j >= ratio_floor`.
    pub rates_comparable: bool,
    /// `N^a u_m <= 1`.
    pub last_rate_small: bool,
    /// `N r_{1,m} >= s_min`.
    pub tunneling: bool,
}

pub fn check_regime(params: &PopulationParams, thresholds: &RegimeThresholds) -> RegimeReport {
    let n = params.n as f64;
    let rates = &params.rates;
    let r = scaling_constants(rates);
    let lambda_hat = n * rates.u(1);
    let tunneling_strength = n * r.r1();
    let gamma_hat = tunneling_strength * tunneling_strength;

    let small_initiation = lambda_hat <= thresholds.lambda_max;
    let tunneling = tunneling_strength >= thresholds.s_min;
    let rates_comparable = rates
        .as_slice()
        .windows(2)
        .all(|w| w[1] >= thresholds.ratio_floor * w[0]);
    let last_rate_small = n.powf(thresholds.rate_exponent) * rates.u(rates.m()) <= 1.0;

    let classification = if small_initiation && tunneling {
        Regime::Theorem2
    } else if small_initiation && (thresholds.gamma_lo..=thresholds.gamma_hi).contains(&gamma_hat) {
        Regime::Theorem3Borderline
    } else if tunneling_strength <= thresholds.s_fix {
        Regime::FixationDominated
    } else {
        Regime::Indeterminate
    };

    RegimeReport {
        lambda_hat,
        tunneling_strength,
        gamma_hat,
        classification,
        small_initiation,
        rates_comparable,
        last_rate_small,
        tunneling,
    }
}
