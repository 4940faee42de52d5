use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::{SeedSpec, SimConfig, Termination};
use crate::error::{Error, Result};

/// One run of the neutral two-type Moran chain until one type is lost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct M0Outcome {
    /// `0` or `N`; the last visited level if a cutoff hit first.
    pub absorbed_at: u64,
    /// Absorption time.
    pub t: f64,
    /// `l[k - 1]`: total time spent with `k` type 1 individuals, `1 <= k < N`.
    pub l: Vec<f64>,
    /// `r[k - 1]`: number of sojourns at level `k`, counting the starting one.
    pub r: Vec<u64>,
    /// `1 + sum_k r[k]`.
    pub r_total: u64,
    pub termination: Termination,
}

impl M0Outcome {
    pub fn fixed(&self) -> bool {
        self.termination == Termination::Completed && self.absorbed_at > 0
    }

    pub fn occupation(&self, k: usize) -> f64 {
        self.l[k - 1]
    }

    pub fn visits(&self, k: usize) -> u64 {
        self.r[k - 1]
    }
}

/// Type 1 count `k` moves up and down, each at rate `k (N - k) / N`,
/// starting from `j0`, until it hits 0 or `N`.
pub fn simulate_m0(n: u64, j0: u64, config: &SimConfig, seed: SeedSpec) -> Result<M0Outcome> {
    if n < 2 {
        return Err(Error::invalid(
            "N",
            format!("population size {n} must be at least 2"),
        ));
    }
    if j0 > n {
        return Err(Error::invalid(
            "j0",
            format!("initial count {j0} exceeds N = {n}"),
        ));
    }
    let levels = (n - 1) as usize;
    let mut l = vec![0.0; levels];
    let mut r = vec![0u64; levels];
    let mut k = j0;
    let mut t = 0.0;
    let mut jumps = 0u64;
    let mut rng = seed.rng();
    let nf = n as f64;

    let termination = loop {
        if k == 0 || k == n {
            break Termination::Completed;
        }
        if jumps >= config.max_events {
            break Termination::EventCutoff;
        }
        let idx = (k - 1) as usize;
        r[idx] += 1;
        let rate = 2.0 * k as f64 * (n - k) as f64 / nf;
        let dt = rng.sample::<f64, _>(Exp1) / rate;
        if t + dt > config.max_time {
            l[idx] += config.max_time - t;
            t = config.max_time;
            break Termination::TimeCutoff;
        }
        t += dt;
        l[idx] += dt;
        jumps += 1;
        if rng.random::<bool>() {
            k += 1;
        } else {
            k -= 1;
        }
    };

    Ok(M0Outcome {
        absorbed_at: k,
        t,
        r_total: 1 + r.iter().sum::<u64>(),
        l,
        r,
        termination,
    })
}
