//! Exact event-driven simulation.
//!
//! Every simulator here is a continuous-time Markov chain sampled with
//! competing exponential clocks: draw the holding time from the total rate,
//! then pick the event proportionally to its rate. State is type counts only.

mod branching;
mod m0;
mod moran;
mod rng;
mod runner;

pub use branching::{
    simulate_branching, simulate_branching_immigration, BranchOutcome, ImmigrationOutcome,
};
pub use m0::{simulate_m0, M0Outcome};
pub use moran::{simulate_m1, simulate_tau_m, M1Outcome, TauOutcome, TrajectoryPoint};
pub use rng::SeedSpec;
pub use runner::{run_replicates, Parallelism};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{scaling_constants, PopulationParams};

/// Hard ceiling on effective events for any single replicate.
pub const DEFAULT_MAX_EVENTS: u64 = 10_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub max_time: f64,
    pub max_events: u64,
    pub record_trajectory: bool,
}

impl SimConfig {
    pub fn new(max_time: f64, max_events: u64) -> Result<Self> {
        if !(max_time > 0.0) {
            return Err(Error::invalid(
                "max_time",
                format!("{max_time} must be positive"),
            ));
        }
        if max_events == 0 {
            return Err(Error::invalid("max_events", "must be positive"));
        }
        Ok(Self {
            max_time,
            max_events,
            record_trajectory: false,
        })
    }

    /// Cutoffs for a waiting-time run: about a million mean waiting times
    /// `1 / (N r_{0,m})`, falling back to `1 / (N u_1)` and then to `10^6`
    /// when those are infinite.
    pub fn for_tau(params: &PopulationParams) -> Self {
        let n = params.n as f64;
        let r0 = scaling_constants(&params.rates).r0();
        let scale = if r0 > 0.0 {
            1.0 / (n * r0)
        } else if params.rates.u(1) > 0.0 {
            1.0 / (n * params.rates.u(1))
        } else {
            1.0
        };
        Self {
            max_time: 1e6 * scale,
            max_events: DEFAULT_MAX_EVENTS,
            record_trajectory: false,
        }
    }

    /// No time limit; only the event ceiling applies.
    pub fn unbounded_time(max_events: u64) -> Self {
        Self {
            max_time: f64::INFINITY,
            max_events,
            record_trajectory: false,
        }
    }
}

/// Why a replicate stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The stopping event of interest occurred (type `m` appeared, a
    /// type-2 mutation fired, or the process went extinct/absorbed).
    Completed,
    TimeCutoff,
    EventCutoff,
}

impl Termination {
    pub fn is_censored(self) -> bool {
        self != Termination::Completed
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::TimeCutoff => "time_cutoff",
            Termination::EventCutoff => "event_cutoff",
        }
    }
}

/// Index of the entry whose cumulative weight first exceeds `target`.
///
/// Round-off can leave `target` at or just past the total; the last
/// positive-weight entry is returned then.
#[inline]
pub(crate) fn pick_index(weights: &[f64], target: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last = i;
            if target < acc {
                return i;
            }
        }
    }
    last
}
