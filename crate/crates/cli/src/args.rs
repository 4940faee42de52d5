use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "moran",
    version,
    about = "Waiting times for multiple mutations in the neutral Moran model",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the first time a type m individual appears.
    Tau(TauArgs),
    /// Run one of the preset figure experiments.
    Figure(FigureArgs),
    /// Simulate the two-type chain without mutation until absorption.
    M0(M0Args),
    /// Evaluate closed forms and series.
    Limits {
        #[command(subcommand)]
        which: LimitsCommand,
    },
}

/// Flags shared by the simulation commands.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Master seed; replicate i uses the stream (seed, i).
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Event ceiling per replicate.
    #[arg(long)]
    pub max_events: Option<u64>,
    /// Output prefix: writes <out>.csv and <out>.manifest.json. Without it
    /// the table goes to stdout and the manifest to stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Encoding of the per-replicate table.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "MORAN_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Compare {
    /// Pick a law from the regime classification.
    Auto,
    /// Theorem 1 law with lambda = N u1 (m = 2 only), on the tau N r0 scale.
    Theorem1,
    /// Unit exponential on the tau N r0 scale.
    Theorem2,
    /// Exponential with rate alpha(gamma), gamma = (N r1)^2, on the u1 tau scale.
    Theorem3,
    None,
}

#[derive(Debug, Clone, Args)]
pub struct TauArgs {
    /// Population size N.
    #[arg(long)]
    pub n: u64,
    /// Comma-separated mutation rates u1,...,um.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub u: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub reps: u64,
    /// Time cutoff; defaults to a million mean waiting times.
    #[arg(long)]
    pub max_time: Option<f64>,
    #[arg(long, value_enum, default_value_t = Compare::Auto)]
    pub compare: Compare,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// N = 1000, u1 = u2 = 1e-4, against Exp(1).
    Fig1,
    /// N = 1000, u1 = 1e-3, u2 = 1e-4, against the Theorem 1 law with lambda = 1.
    Fig2,
    /// N = 1000, u1 = 1e-4, u2 = 1e-6, against Exp(alpha(1)) on the u1 tau scale.
    Fig3,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub preset: Preset,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    #[arg(long)]
    pub max_time: Option<f64>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct M0Args {
    #[arg(long)]
    pub n: u64,
    /// Initial number of type 1 individuals.
    #[arg(long, default_value_t = 1)]
    pub j0: u64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    /// Levels k for the per-level table; defaults to every level when
    /// N <= 65 and to 1, 2, 5, 10, 20, 50, ... otherwise.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<u64>>,
    #[command(flatten)]
    pub run: RunArgs,
}

/// Grid options for `--table` output.
#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Emit a CSV grid instead of a single JSON value.
    #[arg(long)]
    pub table: bool,
    #[arg(long)]
    pub min: Option<f64>,
    #[arg(long)]
    pub max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Write the grid to <out>.csv instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum LimitsCommand {
    /// alpha(gamma); the table is log-spaced in gamma (default 0.01..100).
    Alpha {
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// u(x) and its first two derivatives; the table spans x (default 0..1).
    U {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        x: Option<f64>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// g2(t) and the Riccati roots; the table spans t (default 0..10/sqrt(u2)).
    G2 {
        #[arg(long)]
        u2: f64,
        #[arg(long)]
        t: Option<f64>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Theorem 1 density, cdf and hazard of the scaled waiting time. With
    /// --u2 also the branching-with-immigration values before the limit.
    F2 {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        u2: Option<f64>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Scaling constants r_1..r_m and branching probabilities p_1..p_m.
    R {
        /// Comma-separated rates u2,...,um.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        u: Vec<f64>,
        /// Number of stages; must equal the number of rates plus one.
        #[arg(long)]
        m: Option<usize>,
        /// Adds r_0 = u1 r_1.
        #[arg(long)]
        u1: Option<f64>,
        /// Adds the waiting-time scale 1/(N r_0); needs --u1.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        table: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// P(Z > n) for the total progeny Z of a critical binary branching
    /// process; the table is log-spaced in n up to --n.
    Progeny {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Expectations for the two-type chain started from one mutant; the
    /// table lists every level k.
    M0 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        table: TableArgs,
    },
}
