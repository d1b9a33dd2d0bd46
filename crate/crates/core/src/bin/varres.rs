use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use varres::cli::{self, CliError, Overrides};
use varres::montecarlo::Execution;

#[derive(Parser)]
#[command(
    name = "varres",
    version,
    about = "Variable-resolution ADC receiver sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo sweep and emit CSV (or a table).
    Sweep(RunArgs),
    /// Print the ADC distortion factor for 1..=10 bits.
    EtaTable,
    /// Report how much channel energy the dominant eigenmode carries.
    ChannelStats(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment file (key = value). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; overrides the file's `output` key. Stdout otherwise.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Master seed; overrides the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Trial count; overrides the file.
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads (0 = one per core). Ignored without the `parallel` feature.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            trials: self.trials,
            output: self.output.clone(),
        }
    }
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    Ok(f())
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::EtaTable => print!("{}", cli::cmd_eta_table()),
        Command::Sweep(args) => {
            let file = cli::load_experiment(args.config.as_deref(), &args.overrides())?;
            let text = with_threads(args.threads, || cli::cmd_sweep(&file, Execution::default()))??;
            if file.output.is_none() {
                print!("{text}");
            }
        }
        Command::ChannelStats(args) => {
            let file = cli::load_experiment(args.config.as_deref(), &args.overrides())?;
            let text = with_threads(args.threads, || {
                cli::cmd_channel_stats(&file, Execution::default())
            })??;
            match &args.output {
                Some(path) => std::fs::write(path, text).map_err(|e| {
                    CliError::Runtime(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("varres: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
