use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SeedSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Parallelism {
    Serial,
    /// Rayon's global pool.
    #[default]
    Global,
    /// A dedicated pool with this many workers.
    Threads(usize),
}

/// Runs `task` for replicates `0..n_replicates` and returns the outcomes in
/// replicate order.
///
/// Replicate `i` only ever sees `SeedSpec::new(master_seed, i)`, so the
/// output does not depend on `parallelism`.
pub fn run_replicates<T, F>(
    n_replicates: u64,
    master_seed: u64,
    parallelism: Parallelism,
    task: F,
) -> Vec<T>
where
    T: Send,
    F: Fn(SeedSpec) -> T + Sync + Send,
{
    let seeds = (0..n_replicates).map(|i| SeedSpec::new(master_seed, i));
    match parallelism {
        Parallelism::Serial => seeds.map(task).collect(),
        Parallelism::Global => seeds
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(task)
            .collect(),
        Parallelism::Threads(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .expect("failed to build worker pool");
            let seeds: Vec<_> = seeds.collect();
            pool.install(|| seeds.into_par_iter().map(task).collect())
        }
    }
}
