//! Command-line front end: security-bound tables, seeded session batches and
//! parameter sweeps, written as CSV or JSON.

pub mod bounds;
mod error;
pub mod grid;
pub mod params;
pub mod run;
pub mod sweep;
pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mistrust::harness::{Party, Protocol, StrategyDescriptor};

pub use error::CliError;
use params::ProtocolArgs;
use sweep::{Experiment, SweepSpec};
use table::{Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "mistrust",
    version,
    about = "Simulate quantum commitment and coin-tossing protocols"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate security bounds over a θ grid.
    Bounds(BoundsArgs),
    /// Run seeded sessions and summarize their verdicts.
    Run(RunArgs),
    /// Sweep one parameter and aggregate trials per point.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// θ grid, e.g. `0.05,0.3,pi/2` or `0.1:pi/2:16`.
    #[arg(long)]
    pub theta: String,
    /// String lengths for the n − S(ρ) columns.
    #[arg(long, default_value = "1,2,4,8")]
    pub n: String,
    /// Bits that must stay hidden, for the minimum-n column.
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Codebook overlap ε for the multistring column; sin θ when absent.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Numbers of strings kept open, one column each.
    #[arg(long, default_value = "1,2,4,8")]
    pub r2: String,
    #[command(flatten)]
    pub output: Output,
}

fn protocol(text: &str) -> Result<Protocol, String> {
    text.parse().map_err(|e: mistrust::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// bitwise_commit, codebook_commit or coin_toss.
    #[arg(long, value_parser = protocol)]
    pub protocol: Protocol,
    #[command(flatten)]
    pub params: ProtocolArgs,
    /// Alice's strategy, `name` or `name:key=value,...`.
    #[arg(long, default_value = "honest")]
    pub alice: String,
    /// Bob's strategy, `name` or `name:key=value,...`.
    #[arg(long, default_value = "honest")]
    pub bob: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Write every transcript as `{protocol}-{seed}-{trial}.jsonl` here.
    #[arg(long)]
    pub transcripts_dir: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub experiment: Experiment,
    /// Protocol for session sweeps.
    #[arg(long, value_parser = protocol)]
    pub protocol: Option<Protocol>,
    /// Parameter to vary.
    #[arg(long)]
    pub variable: String,
    /// Values, in grid syntax.
    #[arg(long)]
    pub values: String,
    /// Other parameters, `key=value,...`.
    #[arg(long, default_value = "")]
    pub fixed: String,
    #[arg(long, default_value = "honest")]
    pub alice: String,
    #[arg(long, default_value = "honest")]
    pub bob: String,
    /// Sessions (or attack trials) per point.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

fn emit(table: &Table, output: &Output) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(output.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write(output.format, &mut lock)?;
        }
    }
    Ok(())
}

fn strategy(party: Party, text: &str) -> Result<StrategyDescriptor, CliError> {
    Ok(StrategyDescriptor::parse(party, text)?)
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bounds(a) => {
            let thetas = grid::parse_grid(&a.theta)?;
            let ns = grid::parse_count_grid(&a.n)?;
            let r2s = grid::parse_count_grid(&a.r2)?;
            let table = bounds::bounds_table(&thetas, &ns, a.r, a.epsilon, &r2s)?;
            emit(&table, &a.output)
        }
        Command::Run(a) => {
            if a.trials == 0 {
                return Err(CliError::Usage("trials must be at least 1".into()));
            }
            let params = a.params.build(a.protocol)?;
            let alice = strategy(Party::Alice, &a.alice)?;
            let bob = strategy(Party::Bob, &a.bob)?;
            let transcripts = run::run_trials(&params, &alice, &bob, a.seed, a.trials)?;
            if let Some(dir) = &a.transcripts_dir {
                run::write_transcripts(dir, a.seed, &transcripts)?;
            }
            emit(&run::summarize(&params, &transcripts), &a.output)
        }
        Command::Sweep(a) => {
            let spec = SweepSpec {
                experiment: a.experiment,
                variable: a.variable,
                values: grid::parse_grid(&a.values)?,
                fixed: grid::parse_assignments(&a.fixed)?.into_iter().collect(),
                trials: a.trials,
                seed: a.seed,
                protocol: a.protocol,
                alice: strategy(Party::Alice, &a.alice)?,
                bob: strategy(Party::Bob, &a.bob)?,
            };
            emit(&sweep::run_sweep(&spec)?, &a.output)
        }
    }
}

/// Parses `args` (program name first), runs the command and maps the
/// outcome to an exit status: 0 success, 2 usage, 1 runtime failure.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2));
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
