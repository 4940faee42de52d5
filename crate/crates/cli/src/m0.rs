//! `m0`: the two-type chain without mutation.

use std::time::Instant;

use moran_core::analytic::{m0_expectations, m0_fixation_probability, M0Expectations};
use moran_core::sim::{run_replicates, simulate_m0, SimConfig, Termination, DEFAULT_MAX_EVENTS};
use moran_core::stats::{mean_se, proportion_se};
use serde::Serialize;

use crate::args::M0Args;
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, fmt_opt, to_value, Manifest, Sink, Table, Tool, SCHEMA_VERSION};
use crate::tau::parallelism;

/// Per-replicate record kept after the run; only the requested levels are
/// retained.
struct Reduced {
    absorbed_at: u64,
    t: f64,
    r_total: u64,
    termination: Termination,
    fixed: bool,
    /// `(L_k, R_k)` for each requested level.
    levels: Vec<(f64, u64)>,
}

pub fn default_levels(n: u64) -> Vec<u64> {
    if n <= 65 {
        return (1..n).collect();
    }
    let mut levels = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for step in [1, 2, 5] {
            let k = step * decade;
            if k >= n {
                break 'outer;
            }
            levels.push(k);
        }
        decade *= 10;
    }
    levels
}

#[derive(Debug, Clone, Serialize)]
struct M0Params {
    n: u64,
    j0: u64,
    reps: u64,
    seed: u64,
    max_events: u64,
    levels: Vec<u64>,
    threads: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct M0Summary {
    pub replicates: u64,
    pub censored_fraction: f64,
    pub fixation_frequency: Option<f64>,
    pub fixation_se: Option<f64>,
    pub fixation_expected: f64,
    pub mean_t: Option<f64>,
    pub se_t: Option<f64>,
    /// Closed form, available for `j0 = 1` only.
    pub mean_t_expected: Option<f64>,
}

fn opt_mean_se(samples: &[f64]) -> (Option<f64>, Option<f64>) {
    match mean_se(samples) {
        Ok((m, s)) => (Some(m), Some(s)),
        Err(_) => (None, None),
    }
}

pub fn cmd_m0(args: &M0Args, argv: &[String], sink: &mut Sink<'_>) -> Result<M0Summary> {
    let start = Instant::now();
    let n = args.n;
    if n < 2 {
        return Err(CliError::Usage(format!(
            "--n {n}: population size must be at least 2"
        )));
    }
    if !(1..n).contains(&args.j0) {
        return Err(CliError::Usage(format!(
            "--j0 {} must lie in 1..={}",
            args.j0,
            n - 1
        )));
    }
    let levels = args.levels.clone().unwrap_or_else(|| default_levels(n));
    if let Some(&k) = levels.iter().find(|&&k| !(1..n).contains(&k)) {
        return Err(CliError::Usage(format!(
            "--levels: {k} must lie in 1..={}",
            n - 1
        )));
    }
    let config = SimConfig::unbounded_time(args.run.max_events.unwrap_or(DEFAULT_MAX_EVENTS));
    let par = parallelism(args.run.threads)?;
    let results: Vec<Result<Reduced, moran_core::Error>> =
        run_replicates(args.reps, args.run.seed, par, |s| {
            let o = simulate_m0(n, args.j0, &config, s)?;
            Ok(Reduced {
                absorbed_at: o.absorbed_at,
                t: o.t,
                r_total: o.r_total,
                termination: o.termination,
                fixed: o.fixed(),
                levels: levels
                    .iter()
                    .map(|&k| (o.occupation(k as usize), o.visits(k as usize)))
                    .collect(),
            })
        });
    let outs = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new([
        "replicate_index",
        "absorbed_at",
        "t",
        "r_total",
        "termination",
    ]);
    for (i, o) in outs.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            o.absorbed_at.to_string(),
            fmt_f64(o.t),
            o.r_total.to_string(),
            o.termination.as_str().to_string(),
        ]);
    }
    sink.main_table(&table)?;

    let done: Vec<&Reduced> = outs
        .iter()
        .filter(|o| !o.termination.is_censored())
        .collect();
    let closed_form = |k: u64| -> Option<M0Expectations> {
        (args.j0 == 1)
            .then(|| m0_expectations(n, k))
            .transpose()
            .ok()
            .flatten()
    };
    let mut level_table = Table::new([
        "k",
        "mean_l",
        "se_l",
        "expected_l",
        "mean_r",
        "se_r",
        "expected_r",
        "mean_r_given_loss",
        "se_r_given_loss",
        "expected_r_given_loss",
        "mean_r_given_fix",
        "se_r_given_fix",
        "expected_r_given_fix",
    ]);
    for (idx, &k) in levels.iter().enumerate() {
        let l: Vec<f64> = done.iter().map(|o| o.levels[idx].0).collect();
        let r: Vec<f64> = done.iter().map(|o| o.levels[idx].1 as f64).collect();
        let r_loss: Vec<f64> = done
            .iter()
            .filter(|o| !o.fixed)
            .map(|o| o.levels[idx].1 as f64)
            .collect();
        let r_fix: Vec<f64> = done
            .iter()
            .filter(|o| o.fixed)
            .map(|o| o.levels[idx].1 as f64)
            .collect();
        let e = closed_form(k);
        let mut row = vec![k.to_string()];
        for (samples, expected) in [
            (&l, e.map(|e| e.el_k)),
            (&r, e.map(|e| e.er_k)),
            (&r_loss, e.map(|e| e.er_k_given_loss)),
            (&r_fix, e.map(|e| e.er_k_given_fix)),
        ] {
            let (m, s) = opt_mean_se(samples);
            row.extend([fmt_opt(m), fmt_opt(s), fmt_opt(expected)]);
        }
        level_table.push(row);
    }
    sink.side_table("levels", &level_table)?;

    let completed = done.len() as u64;
    let (fix, fix_se) = if completed > 0 {
        let hits = done.iter().filter(|o| o.fixed).count() as u64;
        let (p, se) = proportion_se(hits, completed);
        (Some(p), Some(se))
    } else {
        (None, None)
    };
    let times: Vec<f64> = done.iter().map(|o| o.t).collect();
    let (mean_t, se_t) = opt_mean_se(&times);
    let censored = args.reps - completed;
    if censored > 0 {
        sink.warn(&format!(
            "{censored} of {} replicates hit the event cutoff",
            args.reps
        ));
    }
    let summary = M0Summary {
        replicates: args.reps,
        censored_fraction: if args.reps == 0 {
            0.0
        } else {
            censored as f64 / args.reps as f64
        },
        fixation_frequency: fix,
        fixation_se: fix_se,
        fixation_expected: m0_fixation_probability(n, args.j0),
        mean_t,
        se_t,
        mean_t_expected: closed_form(1).map(|e| e.et),
    };
    let params = M0Params {
        n,
        j0: args.j0,
        reps: args.reps,
        seed: args.run.seed,
        max_events: config.max_events,
        levels,
        threads: args.run.threads,
    };
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool: Tool::default(),
        command: "m0".into(),
        argv: argv.to_vec(),
        params: to_value(&params)?,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        summary: to_value(&summary)?,
        regime: None,
        comparison: None,
        figure: None,
        outputs: sink.written().to_vec(),
    };
    sink.manifest(&manifest)?;
    Ok(summary)
}
