use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::{pick_index, SeedSpec, SimConfig, Termination};
use crate::error::{Error, Result};
use crate::model::{PopulationParams, TypeCounts};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub time: f64,
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauOutcome {
    /// Time the first type `m` individual appeared, or the cutoff time.
    pub tau: f64,
    pub termination: Termination,
    /// Composition-changing events (replacements with different parent and
    /// dying types, plus mutations).
    pub n_events: u64,
    /// Number of type `j` mutations for `j = 1..=m`.
    pub mutations_per_stage: Vec<u64>,
    /// Whether type 0 was ever lost completely.
    pub type1_fixation_occurred: bool,
    pub trajectory: Option<Vec<TrajectoryPoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct M1Outcome {
    pub type_m_born: bool,
    /// Time at which the run stopped.
    pub extinction_or_fixation_time: f64,
    /// Largest number of non-type-0 individuals seen.
    pub max_nonzero: u64,
    pub termination: Termination,
    pub n_events: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Event {
    /// An individual of type `dying` is replaced by the offspring of one of
    /// type `parent`.
    Replace { dying: usize, parent: usize },
    /// A type `from` individual becomes type `from + 1`.
    Mutate { from: usize },
}

/// Rates of the thinned Moran chain.
///
/// Replacements where parent and dying individual share a type do nothing,
/// so only ordered pairs `i != j` are drawn, at rate `X_i X_j / N`. The
/// dying type is picked first with weight `X_i (N - X_i) / N`, then the
/// parent among the other `N - X_i` individuals.
struct MoranRates<'a> {
    n: u64,
    u: &'a [f64],
    /// Lowest type allowed to mutate.
    first_mutating: usize,
    weights: Vec<f64>,
}

impl<'a> MoranRates<'a> {
    fn new(n: u64, u: &'a [f64], first_mutating: usize) -> Self {
        let m = u.len();
        Self {
            n,
            u,
            first_mutating,
            weights: vec![0.0; 2 * m + 1],
        }
    }

    fn next_event<R: Rng>(&mut self, x: &TypeCounts, rng: &mut R) -> Option<(f64, Event)> {
        let m = self.u.len();
        let n = self.n as f64;
        let counts = x.as_slice();
        let mut total = 0.0;
        for (i, &xi) in counts.iter().enumerate() {
            let w = xi as f64 * (self.n - xi) as f64 / n;
            self.weights[i] = w;
            total += w;
        }
        for (j, &xj) in counts.iter().take(m).enumerate() {
            let w = if j >= self.first_mutating {
                xj as f64 * self.u[j]
            } else {
                0.0
            };
            self.weights[m + 1 + j] = w;
            total += w;
        }
        if total <= 0.0 {
            return None;
        }
        let dt = rng.sample::<f64, _>(Exp1) / total;
        let k = pick_index(&self.weights, rng.random::<f64>() * total);
        if k <= m {
            let others = (self.n - counts[k]) as f64;
            let target = rng.random::<f64>() * others;
            let mut acc = 0.0;
            let mut parent = k;
            for (j, &xj) in counts.iter().enumerate() {
                if j == k || xj == 0 {
                    continue;
                }
                acc += xj as f64;
                parent = j;
                if target < acc {
                    break;
                }
            }
            Some((dt, Event::Replace { dying: k, parent }))
        } else {
            Some((dt, Event::Mutate { from: k - m - 1 }))
        }
    }
}

/// Samples `tau_m`, the first time a type `m` individual exists, starting
/// from `N` type 0 individuals.
///
/// While the whole population is type 0 the only possible event is a type 1
/// mutation at rate `N u_1`, so the clock jumps straight to it.
pub fn simulate_tau_m(params: &PopulationParams, config: &SimConfig, seed: SeedSpec) -> TauOutcome {
    let mut rng = seed.rng();
    let m = params.m();
    let n = params.n;
    let u = params.rates.as_slice();
    let mut rates = MoranRates::new(n, u, 0);
    let mut x = TypeCounts::wild_type(n, m);
    let mut mutations = vec![0u64; m];
    let mut trajectory = config.record_trajectory.then(|| {
        vec![TrajectoryPoint {
            time: 0.0,
            counts: x.as_slice().to_vec(),
        }]
    });
    let mut t = 0.0;
    let mut n_events = 0u64;
    let mut fixation = false;

    let termination = loop {
        if n_events >= config.max_events {
            break Termination::EventCutoff;
        }
        let (dt, event) = if x.get(0) == n {
            let rate = n as f64 * u[0];
            if rate <= 0.0 {
                t = config.max_time;
                break Termination::TimeCutoff;
            }
            (rng.sample::<f64, _>(Exp1) / rate, Event::Mutate { from: 0 })
        } else {
            match rates.next_event(&x, &mut rng) {
                Some(next) => next,
                None => {
                    t = config.max_time;
                    break Termination::TimeCutoff;
                }
            }
        };
        if t + dt > config.max_time {
            t = config.max_time;
            break Termination::TimeCutoff;
        }
        t += dt;
        n_events += 1;
        let hit = match event {
            Event::Replace { dying, parent } => {
                x.transfer(dying, parent);
                false
            }
            Event::Mutate { from } => {
                x.transfer(from, from + 1);
                mutations[from] += 1;
                from + 1 == m
            }
        };
        debug_assert_eq!(x.total(), n);
        fixation |= x.get(0) == 0;
        if let Some(points) = trajectory.as_mut() {
            points.push(TrajectoryPoint {
                time: t,
                counts: x.as_slice().to_vec(),
            });
        }
        if hit {
            break Termination::Completed;
        }
    };

    TauOutcome {
        tau: t,
        termination,
        n_events,
        mutations_per_stage: mutations,
        type1_fixation_occurred: fixation,
        trajectory,
    }
}

/// One type 1 founder among `N - 1` type 0 individuals, with type 1
/// mutations switched off; reports whether a type `m` individual is ever
/// born. The replicate mean of `type_m_born` estimates `q_m`.
///
/// The run stops when type `m` appears, when every non-type-0 lineage is
/// lost, or when no individual present can still reach type `m`. Fixation
/// of mutant types does not stop it.
pub fn simulate_m1(
    params: &PopulationParams,
    config: &SimConfig,
    seed: SeedSpec,
) -> Result<M1Outcome> {
    let m = params.m();
    if m < 2 {
        return Err(Error::invalid("m", "the single-founder model needs m >= 2"));
    }
    let mut rng = seed.rng();
    let n = params.n;
    let u = params.rates.as_slice();
    // can_reach[j]: a type j individual has a mutational path to type m.
    let mut can_reach = vec![false; m + 1];
    can_reach[m] = true;
    for j in (0..m).rev() {
        can_reach[j] = can_reach[j + 1] && u[j] > 0.0;
    }
    let reachable = |x: &TypeCounts| (1..m).any(|j| can_reach[j] && x.get(j) > 0);

    let mut rates = MoranRates::new(n, u, 1);
    let mut x = TypeCounts::single_mutant(n, m, 1);
    let mut t = 0.0;
    let mut n_events = 0u64;
    let mut max_nonzero = 1u64;
    let mut born = false;

    let termination = loop {
        if !reachable(&x) {
            break Termination::Completed;
        }
        if n_events >= config.max_events {
            break Termination::EventCutoff;
        }
        let Some((dt, event)) = rates.next_event(&x, &mut rng) else {
            break Termination::Completed;
        };
        if t + dt > config.max_time {
            t = config.max_time;
            break Termination::TimeCutoff;
        }
        t += dt;
        n_events += 1;
        match event {
            Event::Replace { dying, parent } => x.transfer(dying, parent),
            Event::Mutate { from } => {
                x.transfer(from, from + 1);
                if from + 1 == m {
                    born = true;
                }
            }
        }
        debug_assert_eq!(x.total(), n);
        max_nonzero = max_nonzero.max(n - x.get(0));
        if born {
            break Termination::Completed;
        }
    };

    Ok(M1Outcome {
        type_m_born: born,
        extinction_or_fixation_time: t,
        max_nonzero,
        termination,
        n_events,
    })
}
