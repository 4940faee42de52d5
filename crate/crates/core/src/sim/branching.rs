use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::{pick_index, SeedSpec, SimConfig, Termination};
use crate::error::{Error, Result};
use crate::model::MutationRates;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchOutcome {
    pub type_m_born: bool,
    /// Type 1 individuals ever alive, founder included. A lower bound when
    /// the run was cut off.
    pub total_progeny: u64,
    /// Extinction time; `None` if the run stopped for another reason.
    pub lifetime: Option<f64>,
    pub termination: Termination,
    pub n_events: u64,
}

/// Multi-type branching process from one type 1 individual. Each type
/// `1 <= j < m` individual gives birth at rate 1, dies at rate 1 and turns
/// into type `j + 1` at rate `u_{j+1}`. `u_1` is ignored.
///
/// Stops at the first type `m`, at extinction, or at a cutoff.
pub fn simulate_branching(
    rates: &MutationRates,
    config: &SimConfig,
    seed: SeedSpec,
) -> Result<BranchOutcome> {
    let m = rates.m();
    if m < 2 {
        return Err(Error::invalid("m", "the branching process needs m >= 2"));
    }
    let mut rng = seed.rng();
    // y[j - 1] holds the number of type j individuals, j = 1..m-1.
    let mut y = vec![0u64; m - 1];
    y[0] = 1;
    // per-type weights: births, deaths, mutations
    let mut weights = vec![0.0; 3 * (m - 1)];
    let mut progeny = 1u64;
    let mut t = 0.0;
    let mut n_events = 0u64;
    let mut born = false;

    let termination = loop {
        if y.iter().all(|&c| c == 0) {
            break Termination::Completed;
        }
        if n_events >= config.max_events {
            break Termination::EventCutoff;
        }
        let mut total = 0.0;
        for (j, &c) in y.iter().enumerate() {
            let c = c as f64;
            let mu = rates.u(j + 2);
            weights[3 * j] = c;
            weights[3 * j + 1] = c;
            weights[3 * j + 2] = c * mu;
            total += c * (2.0 + mu);
        }
        let dt = rng.sample::<f64, _>(Exp1) / total;
        if t + dt > config.max_time {
            t = config.max_time;
            break Termination::TimeCutoff;
        }
        t += dt;
        n_events += 1;
        let k = pick_index(&weights, rng.random::<f64>() * total);
        let j = k / 3;
        match k % 3 {
            0 => {
                y[j] += 1;
                if j == 0 {
                    progeny += 1;
                }
            }
            1 => y[j] -= 1,
            _ => {
                y[j] -= 1;
                if j + 2 == m {
                    born = true;
                    break Termination::Completed;
                }
                y[j + 1] += 1;
            }
        }
    };

    let extinct = termination == Termination::Completed && !born;
    Ok(BranchOutcome {
        type_m_born: born,
        total_progeny: progeny,
        lifetime: extinct.then_some(t),
        termination,
        n_events,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImmigrationOutcome {
    /// Time of the first type 2 mutation, or the horizon if censored.
    pub tau2: f64,
    pub censored: bool,
    pub n_events: u64,
}

/// Critical birth–death process `Y` with immigration: `k -> k + 1` at rate
/// `k + immigration_rate`, `k -> k - 1` at rate `k`, started from 0. Each
/// individual carries a type 2 mutation clock of rate `u2`; returns the
/// first time one fires, censored at `horizon`.
pub fn simulate_branching_immigration(
    immigration_rate: f64,
    u2: f64,
    horizon: f64,
    config: &SimConfig,
    seed: SeedSpec,
) -> Result<ImmigrationOutcome> {
    if !(immigration_rate >= 0.0) || !immigration_rate.is_finite() {
        return Err(Error::invalid(
            "immigration_rate",
            format!("{immigration_rate} must be >= 0"),
        ));
    }
    if !(u2 >= 0.0) || !u2.is_finite() {
        return Err(Error::invalid("u2", format!("{u2} must be >= 0")));
    }
    let horizon = horizon.min(config.max_time);
    let mut rng = seed.rng();
    let mut k = 0u64;
    let mut t = 0.0;
    let mut n_events = 0u64;
    loop {
        if n_events >= config.max_events {
            return Ok(ImmigrationOutcome {
                tau2: t,
                censored: true,
                n_events,
            });
        }
        let kf = k as f64;
        let weights = [kf + immigration_rate, kf, kf * u2];
        let total: f64 = weights.iter().sum();
        let dt = if total > 0.0 {
            rng.sample::<f64, _>(Exp1) / total
        } else {
            f64::INFINITY
        };
        if t + dt > horizon {
            return Ok(ImmigrationOutcome {
                tau2: horizon,
                censored: true,
                n_events,
            });
        }
        t += dt;
        n_events += 1;
        match pick_index(&weights, rng.random::<f64>() * total) {
            0 => k += 1,
            1 => k -= 1,
            _ => {
                return Ok(ImmigrationOutcome {
                    tau2: t,
                    censored: false,
                    n_events,
                })
            }
        }
    }
}
