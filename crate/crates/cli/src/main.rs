//! `quartic-lines`: command-line front end of the lattice toolkit.

mod commands;
mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quartic_lines::bounds::Series;
use quartic_lines::configs::WitnessScope;

use crate::commands::Outcome;
use crate::manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "quartic-lines", version, about = "Exact lattice computations for lines on quartic surfaces")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Run the long census stages.
    #[arg(long, global = true)]
    extended: bool,
    /// Where the fourth line of a triangle may be looked for.
    #[arg(long, global = true, value_enum, default_value_t = Scope::Set)]
    witness_scope: Scope,
    /// Write a run manifest (command line, versions, outputs, timings) to this file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scope {
    Set,
    All,
}

impl From<Scope> for WitnessScope {
    fn from(s: Scope) -> Self {
        match s {
            Scope::Set => WitnessScope::Set,
            Scope::All => WitnessScope::All,
        }
    }
}

/// A lattice with a discriminant class, or the `η` data of a series.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Lattice description, e.g. `A11`, `E8+A1+D1`, `A1(4)`.
    #[arg(long, conflicts_with = "series")]
    pub lattice: Option<String>,
    /// Series whose lattice and classes are used (T, X, J*, J, L).
    #[arg(long, value_parser = parse_series)]
    pub series: Option<Series>,
    /// `eta`, `lambda`, `zero`, `nonzero` or class coordinates such as `0,3`.
    #[arg(long, default_value = "eta")]
    pub class: String,
    /// Norm of the vectors, e.g. `-9/4` (default: the class's standard norm).
    #[arg(long, allow_hyphen_values = true)]
    pub norm: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gram matrix and labels of a lattice.
    Lattice {
        /// Lattice description.
        desc: String,
    },
    /// Dual vectors of a norm in a discriminant class.
    Vec {
        #[command(flatten)]
        source: Source,
        /// Add the histogram of pairing values.
        #[arg(long)]
        pairs: bool,
    },
    /// Largest set of vectors with pairings in {q + 2, q + 3}.
    Bnd {
        #[command(flatten)]
        source: Source,
    },
    /// Admissible sets grouped by adjacency graph.
    Classify {
        #[command(flatten)]
        source: Source,
        /// `maximal`, `size-at-least:K`, `contains-k4` or `triangle-free`.
        #[arg(long, default_value = "maximal")]
        strategy: String,
        /// Smallest set size reported.
        #[arg(long)]
        min_size: Option<usize>,
    },
    /// Search, filter and classify the configurations of a series.
    Pipeline {
        #[arg(long, value_parser = parse_series)]
        series: Series,
    },
    /// Elkies' bound from a raw triple, a series or an irrational case.
    Elkies {
        #[arg(long, requires_all = ["tau1", "tau2"], conflicts_with_all = ["series", "case"])]
        n: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        tau1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        tau2: Option<String>,
        #[arg(long, value_parser = parse_series, conflicts_with = "case")]
        series: Option<Series>,
        /// Row of the irrational table, e.g. `2X_9`.
        #[arg(long)]
        case: Option<String>,
    },
    /// Second Betti number of the minimal resolution.
    Betti {
        /// Non-simple singular point; repeat for several.
        #[arg(long = "label", required = true)]
        labels: Vec<String>,
        /// Irregularity of the resolution.
        #[arg(long, default_value_t = 0)]
        irregularity: i64,
    },
    /// Collinearity systems of the twelve-point configurations.
    Tseries {
        /// Built-in name (V16, V17, V19, U'16, U''16) or an incidence-matrix file.
        #[arg(long)]
        config: String,
        /// Print ranks, invariant factors and kernels.
        #[arg(long)]
        analyze: bool,
        /// Decide whether twelve distinct points exist on a group.
        #[arg(long)]
        realize: bool,
        /// `torus`, `gm`, `ga`, `gm-z2`, `ga-z2`, `gm-z3`, `ga-z3` or `all`.
        #[arg(long, default_value = "torus")]
        group: String,
        #[arg(long, default_value_t = 60)]
        max_modulus: u64,
    },
    /// Recompute a summary table with a per-cell comparison.
    Report {
        /// `1` (rational series) or `3` (irrational cases).
        #[arg(long)]
        table: String,
    },
    /// Run the acceptance criteria and report mismatches.
    Regress {
        /// Criterion to run (1-11); repeat for several, default all.
        #[arg(long = "criterion")]
        criteria: Vec<usize>,
    },
}

fn parse_series(s: &str) -> Result<Series, String> {
    s.parse().map_err(|e: quartic_lines::Error| e.to_string())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] quartic_lines::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(quartic_lines::Error::Io(_)) | CliError::Io(_) => 1,
            CliError::Core(_) => 2,
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let ctx = commands::Context {
        format: cli.format,
        extended: cli.extended,
        scope: cli.witness_scope.into(),
    };
    match &cli.command {
        Command::Lattice { desc } => commands::lattice(&ctx, desc),
        Command::Vec { source, pairs } => commands::vectors(&ctx, source, *pairs),
        Command::Bnd { source } => commands::bnd(&ctx, source),
        Command::Classify { source, strategy, min_size } => commands::classify(&ctx, source, strategy, *min_size),
        Command::Pipeline { series } => commands::pipeline(&ctx, *series),
        Command::Elkies { n, tau1, tau2, series, case } => {
            commands::elkies(&ctx, *n, tau1.as_deref(), tau2.as_deref(), *series, case.as_deref())
        }
        Command::Betti { labels, irregularity } => commands::betti(&ctx, labels, *irregularity),
        Command::Tseries { config, analyze, realize, group, max_modulus } => {
            commands::tseries(&ctx, config, *analyze, *realize, group, *max_modulus)
        }
        Command::Report { table } => commands::report(&ctx, table),
        Command::Regress { criteria } => commands::regress(&ctx, criteria),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let started = Instant::now();
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(outcome.rendered.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest::new(std::env::args().collect(), &outcome, started.elapsed());
        if let Err(e) = manifest.write(path) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(outcome.exit)
}
