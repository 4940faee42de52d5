//! `tau` and `figure`: waiting-time experiments in the full model.

use std::time::Instant;

use moran_core::analytic::{theorem1_law, LimitLaw};
use moran_core::model::{
    check_regime, scaling_constants, MutationRates, PopulationParams, Regime, RegimeReport,
    RegimeThresholds,
};
use moran_core::sim::{
    run_replicates, simulate_tau_m, Parallelism, SimConfig, TauOutcome, DEFAULT_MAX_EVENTS,
};
use moran_core::stats::{ks_statistic, mean_se};
use serde::Serialize;

use crate::args::{Compare, FigureArgs, Preset, RunArgs, TauArgs};
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, to_value, Manifest, Sink, Table, Tool, SCHEMA_VERSION};

pub const REFERENCE_POINTS: usize = 512;

pub fn parallelism(threads: Option<usize>) -> Result<Parallelism> {
    match threads {
        None => Ok(Parallelism::Global),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => Ok(Parallelism::Threads(t)),
    }
}

/// The law the samples are tested against and the scale they are put on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub requested: Compare,
    pub resolved: Compare,
    pub law: Option<LimitLaw>,
    /// `n_r0` (tau N r_0), `u1` (u_1 tau) or `identity`.
    pub scale: &'static str,
    pub scale_factor: f64,
}

/// Maps `--compare` to a law. `auto` follows the regime classification:
/// tunneling gives the unit exponential, borderline gives `Exp(alpha)`, and
/// an unclassified two-stage run with strong tunneling gives the Theorem 1
/// law at `lambda = N u1`. Anything else, including runs with a zero rate,
/// is left uncompared.
pub fn resolve_comparison(
    params: &PopulationParams,
    report: &RegimeReport,
    requested: Compare,
) -> Result<Comparison> {
    let n = params.n as f64;
    let u1 = params.rates.u(1);
    let nr0 = n * scaling_constants(&params.rates).r0();
    let resolved = match requested {
        Compare::Auto if nr0 <= 0.0 => Compare::None,
        Compare::Auto => match report.classification {
            Regime::Theorem2 => Compare::Theorem2,
            Regime::Theorem3Borderline => Compare::Theorem3,
            Regime::Indeterminate if params.m() == 2 && report.tunneling => Compare::Theorem1,
            _ => Compare::None,
        },
        other => other,
    };
    let need_positive = |what: &str| {
        CliError::Usage(format!(
            "--compare {} needs every mutation rate to be positive ({what} is 0)",
            compare_name(resolved)
        ))
    };
    let (law, scale, scale_factor) = match resolved {
        Compare::Theorem1 => {
            if params.m() != 2 {
                return Err(CliError::Usage(format!(
                    "--compare theorem1 applies to m = 2, got m = {}",
                    params.m()
                )));
            }
            if nr0 <= 0.0 {
                return Err(need_positive("N r0"));
            }
            (Some(theorem1_law(report.lambda_hat)?), "n_r0", nr0)
        }
        Compare::Theorem2 => {
            if nr0 <= 0.0 {
                return Err(need_positive("N r0"));
            }
            (Some(LimitLaw::exponential(1.0)?), "n_r0", nr0)
        }
        Compare::Theorem3 => {
            if nr0 <= 0.0 {
                return Err(need_positive("N r0"));
            }
            (Some(LimitLaw::theorem3(report.gamma_hat)?), "u1", u1)
        }
        Compare::None | Compare::Auto => {
            if nr0 > 0.0 {
                (None, "n_r0", nr0)
            } else {
                (None, "identity", 1.0)
            }
        }
    };
    Ok(Comparison {
        requested,
        resolved,
        law,
        scale,
        scale_factor,
    })
}

fn compare_name(c: Compare) -> &'static str {
    match c {
        Compare::Auto => "auto",
        Compare::Theorem1 => "theorem1",
        Compare::Theorem2 => "theorem2",
        Compare::Theorem3 => "theorem3",
        Compare::None => "none",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauSummary {
    pub replicates: u64,
    pub completed: u64,
    pub censored: u64,
    pub censored_fraction: f64,
    /// Mean and standard error of the uncensored scaled waiting times.
    pub mean: Option<f64>,
    pub se: Option<f64>,
    pub ks_statistic: Option<f64>,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TauParams {
    pub n: u64,
    pub m: usize,
    pub u: Vec<f64>,
    pub reps: u64,
    pub seed: u64,
    pub max_time: f64,
    pub max_events: u64,
    pub compare: Compare,
    pub threads: Option<usize>,
}

pub struct TauRun {
    pub outcomes: Vec<TauOutcome>,
    pub comparison: Comparison,
    pub report: RegimeReport,
    pub summary: TauSummary,
}

pub fn run_tau(
    params: &PopulationParams,
    reps: u64,
    seed: u64,
    config: &SimConfig,
    compare: Compare,
    parallelism: Parallelism,
) -> Result<TauRun> {
    let report = check_regime(params, &RegimeThresholds::default());
    let comparison = resolve_comparison(params, &report, compare)?;
    let outcomes = run_replicates(reps, seed, parallelism, |s| {
        simulate_tau_m(params, config, s)
    });
    let scaled: Vec<f64> = outcomes
        .iter()
        .filter(|o| !o.termination.is_censored())
        .map(|o| o.tau * comparison.scale_factor)
        .collect();
    let completed = scaled.len() as u64;
    let censored = reps - completed;
    let censored_fraction = if reps == 0 {
        0.0
    } else {
        censored as f64 / reps as f64
    };
    let (mean, se) = match mean_se(&scaled) {
        Ok((m, s)) => (Some(m), Some(s)),
        Err(_) => (None, None),
    };
    let gof = match (&comparison.law, scaled.is_empty()) {
        (Some(law), false) => Some(ks_statistic(&scaled, |t| law.cdf(t))?),
        _ => None,
    };
    Ok(TauRun {
        outcomes,
        comparison,
        report,
        summary: TauSummary {
            replicates: reps,
            completed,
            censored,
            censored_fraction,
            mean,
            se,
            ks_statistic: gof.map(|g| g.ks_statistic),
            p_value: gof.map(|g| g.p_value),
        },
    })
}

pub fn tau_table(outcomes: &[TauOutcome], m: usize, scale_factor: f64) -> Table {
    let mut header: Vec<String> = [
        "replicate_index",
        "tau",
        "scaled_tau",
        "termination",
        "n_events",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((1..=m).map(|j| format!("mutations_{j}")));
    let mut table = Table::new(header);
    for (i, o) in outcomes.iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            fmt_f64(o.tau),
            fmt_f64(o.tau * scale_factor),
            o.termination.as_str().to_string(),
            o.n_events.to_string(),
        ];
        row.extend(o.mutations_per_stage.iter().map(|c| c.to_string()));
        table.push(row);
    }
    table
}

/// The law's cdf, pdf and survival on an even grid from 0 to its 99.9%
/// quantile.
pub fn reference_table(law: &LimitLaw, points: usize) -> Table {
    let t_max = law.quantile(0.999);
    let mut table = Table::new(["t", "cdf", "pdf", "survival"]);
    for i in 0..points {
        let t = t_max * i as f64 / (points - 1) as f64;
        table.push(vec![
            fmt_f64(t),
            fmt_f64(law.cdf(t)),
            fmt_f64(law.pdf(t)),
            fmt_f64(law.survival(t)),
        ]);
    }
    table
}

fn build_params(n: u64, u: &[f64]) -> Result<PopulationParams> {
    Ok(PopulationParams::new(n, MutationRates::new(u.to_vec())?)?)
}

fn build_config(
    params: &PopulationParams,
    max_time: Option<f64>,
    run: &RunArgs,
) -> Result<SimConfig> {
    let max_time = max_time.unwrap_or_else(|| SimConfig::for_tau(params).max_time);
    Ok(SimConfig::new(
        max_time,
        run.max_events.unwrap_or(DEFAULT_MAX_EVENTS),
    )?)
}

struct Experiment<'a> {
    command: &'a str,
    argv: &'a [String],
    params: PopulationParams,
    reps: u64,
    max_time: Option<f64>,
    compare: Compare,
    run: &'a RunArgs,
    figure: Option<serde_json::Value>,
}

fn execute(exp: Experiment<'_>, sink: &mut Sink<'_>) -> Result<TauRun> {
    let start = Instant::now();
    let config = build_config(&exp.params, exp.max_time, exp.run)?;
    let parallelism = parallelism(exp.run.threads)?;
    let run = run_tau(
        &exp.params,
        exp.reps,
        exp.run.seed,
        &config,
        exp.compare,
        parallelism,
    )?;
    sink.main_table(&tau_table(
        &run.outcomes,
        exp.params.m(),
        run.comparison.scale_factor,
    ))?;
    if exp.figure.is_some() {
        if let Some(law) = &run.comparison.law {
            sink.side_table("reference", &reference_table(law, REFERENCE_POINTS))?;
        }
    }
    if run.summary.censored > 0 {
        sink.warn(&format!(
            "{} of {} replicates hit a cutoff and were left out of the summary",
            run.summary.censored, run.summary.replicates
        ));
    }
    let params = TauParams {
        n: exp.params.n,
        m: exp.params.m(),
        u: exp.params.rates.as_slice().to_vec(),
        reps: exp.reps,
        seed: exp.run.seed,
        max_time: config.max_time,
        max_events: config.max_events,
        compare: exp.compare,
        threads: exp.run.threads,
    };
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool: Tool::default(),
        command: exp.command.to_string(),
        argv: exp.argv.to_vec(),
        params: to_value(&params)?,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        summary: to_value(&run.summary)?,
        regime: Some(to_value(&run.report)?),
        comparison: Some(to_value(&run.comparison)?),
        figure: exp.figure,
        outputs: sink.written().to_vec(),
    };
    sink.manifest(&manifest)?;
    Ok(run)
}

pub fn cmd_tau(args: &TauArgs, argv: &[String], sink: &mut Sink<'_>) -> Result<TauRun> {
    execute(
        Experiment {
            command: "tau",
            argv,
            params: build_params(args.n, &args.u)?,
            reps: args.reps,
            max_time: args.max_time,
            compare: args.compare,
            run: &args.run,
            figure: None,
        },
        sink,
    )
}

pub struct PresetSpec {
    pub name: &'static str,
    pub n: u64,
    pub u: [f64; 2],
    pub compare: Compare,
}

pub fn preset(p: Preset) -> PresetSpec {
    match p {
        Preset::Fig1 => PresetSpec {
            name: "fig1",
            n: 1000,
            u: [1e-4, 1e-4],
            compare: Compare::Theorem2,
        },
        Preset::Fig2 => PresetSpec {
            name: "fig2",
            n: 1000,
            u: [1e-3, 1e-4],
            compare: Compare::Theorem1,
        },
        Preset::Fig3 => PresetSpec {
            name: "fig3",
            n: 1000,
            u: [1e-4, 1e-6],
            compare: Compare::Theorem3,
        },
    }
}

#[derive(Debug, Clone, Serialize)]
struct FigureInfo {
    preset: &'static str,
    lambda: f64,
    gamma: f64,
    alpha: Option<f64>,
}

pub fn cmd_figure(args: &FigureArgs, argv: &[String], sink: &mut Sink<'_>) -> Result<TauRun> {
    let fig = preset(args.preset);
    let params = build_params(fig.n, &fig.u)?;
    let report = check_regime(&params, &RegimeThresholds::default());
    let info = FigureInfo {
        preset: fig.name,
        lambda: report.lambda_hat,
        gamma: report.gamma_hat,
        alpha: match fig.compare {
            Compare::Theorem3 => Some(moran_core::analytic::alpha(report.gamma_hat)?),
            _ => None,
        },
    };
    execute(
        Experiment {
            command: "figure",
            argv,
            params,
            reps: args.reps,
            max_time: args.max_time,
            compare: fig.compare,
            run: &args.run,
            figure: Some(to_value(&info)?),
        },
        sink,
    )
}
