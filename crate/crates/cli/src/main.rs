//! `tdvrp`: generate instances and travel-time matrices, solve, compare
//! against an averaged matrix, and export tours as GeoJSON.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod failure;

#[derive(Debug, Parser)]
#[command(name = "tdvrp", version, about = "Time-dependent vehicle routing toolkit")]
pub struct Cli {
    /// Seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output file; most commands write to stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub params: ParamArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Solver knobs. `--l-delete` defaults to 6, capped at the client count.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Number of randomized constructions.
    #[arg(long, global = true, default_value_t = 30)]
    pub n_grasp: usize,
    /// Construction picks among this many cheapest insertions.
    #[arg(long, global = true, default_value_t = 3)]
    pub k_grasp: usize,
    /// Insertion-deletion rounds.
    #[arg(long, global = true, default_value_t = 20)]
    pub n_improve: usize,
    /// Nodes removed per round.
    #[arg(long, global = true)]
    pub l_delete: Option<usize>,
    /// Deletion picks among this many largest savings.
    #[arg(long, global = true, default_value_t = 3)]
    pub k_del: usize,
    /// Reinsertion picks among this many cheapest slots.
    #[arg(long, global = true, default_value_t = 1)]
    pub k_ins: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    /// Replay a JSON-lines recording.
    Recorded,
    /// Query a synthetic rush-hour matrix through the same pipeline.
    Synthetic,
    /// Google Distance Matrix; key read from TDVRP_MAPS_API_KEY.
    Live,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tier {
    Free,
    Paid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// Morning and evening peaks with directional jitter.
    Rush,
    /// No peaks; every layer equal.
    Flat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an instance: the bundled 31-node Paris set, or random nodes.
    GenInstance {
        /// Draw this many nodes (depot included) instead.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Generate a synthetic multi-layer matrix for an instance.
    GenMatrix {
        /// Instance file; the bundled Paris set when omitted.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        layers: usize,
        /// Seconds per layer.
        #[arg(long, default_value_t = 7200)]
        step: i64,
        #[arg(long, value_enum, default_value_t = Profile::Rush)]
        profile: Profile,
        /// Free-flow speed in km/h, overriding the profile.
        #[arg(long)]
        speed: Option<f64>,
        /// Directional jitter in [0, 1), overriding the profile.
        #[arg(long)]
        jitter: Option<f64>,
        /// Peak window START:END:MULTIPLIER (layers inclusive); repeatable,
        /// replaces the profile's windows.
        #[arg(long = "peak", value_name = "START:END:MULT")]
        peaks: Vec<String>,
    },
    /// Plan and run a quota-aware matrix fetch.
    Fetch {
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Backend::Synthetic)]
        backend: Backend,
        /// Recording for the recorded backend.
        #[arg(long, required_if_eq("backend", "recorded"))]
        recording: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        layers: usize,
        #[arg(long, default_value_t = 7200)]
        step: i64,
        /// Departure of layer 0, epoch seconds. Defaults to two weeks from
        /// now, on the hour.
        #[arg(long)]
        start_epoch: Option<i64>,
        /// Append-only cache; rerunning with the same cache resumes.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Tier::Free)]
        tier: Tier,
        /// Daily element quota, overriding the tier.
        #[arg(long)]
        daily_quota: Option<usize>,
        /// Count self pairs as wanted elements.
        #[arg(long)]
        include_self_pairs: bool,
        /// Print the plan and stop.
        #[arg(long)]
        plan_only: bool,
    },
    /// Solve an instance against a matrix file.
    Solve {
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Multi-layer against averaged-matrix planning over consecutive seeds.
    Compare {
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 20)]
        n_seeds: usize,
    },
    /// Render a solve result as a GeoJSON FeatureCollection.
    ExportGeojson {
        #[arg(long)]
        result: PathBuf,
        #[arg(long)]
        instance: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}
