use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wavesys::cli::{self, CliError, DemoConfig, Report, WaveTarget};
use wavesys::forkjoin::DEFAULT_CUTOFF;

#[derive(Parser, Debug)]
#[command(
    name = "wavesys",
    version,
    about = "Fork-join, semaphore, channel and wave-system demos"
)]
struct Args {
    /// Seed for the ChaCha8 input generator.
    #[arg(long, global = true, default_value_t = cli::DEFAULT_SEED)]
    seed: u64,
    /// Problem size (sort 100, sum 32, horner degree 20, sumsq 100, prodcons 20).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Ranges at or below this size recurse without forking.
    #[arg(long, global = true, default_value_t = DEFAULT_CUTOFF)]
    cutoff: usize,
    /// Fork a task for every recursive call.
    #[arg(long, global = true)]
    faithful: bool,
    /// Channel capacity (prodcons) or uniform place capacity (wave).
    #[arg(long, global = true)]
    capacity: Option<usize>,
    /// Number of waves for `wave`.
    #[arg(long, global = true)]
    waves: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parallel quicksort of random integers in [0, 100).
    Sort,
    /// Pairing sum of random integers against a sequential fold.
    Sum,
    /// Polynomial values by the pairing Horner scheme at x = 0..9.
    Horner,
    /// Semaphore-serialized sum of squares, one thread per value.
    Sumsq,
    /// Producer sends 1..n through a bounded channel to a consumer.
    Prodcons,
    /// Run a wave-system net: `fig1` or a net file.
    Wave {
        net: String,
        /// Input stream file as NAME=PATH, one real per line.
        #[arg(long = "input", value_parser = parse_stream_arg)]
        inputs: Vec<(String, PathBuf)>,
    },
}

fn parse_stream_arg(s: &str) -> Result<(String, PathBuf), String> {
    let (name, path) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=PATH, got `{s}`"))?;
    Ok((name.to_string(), PathBuf::from(path)))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = DemoConfig {
        seed: args.seed,
        n: args.n,
        cutoff: args.cutoff,
        faithful: args.faithful,
        capacity: args.capacity,
        waves: args.waves,
    };
    let result: Result<Report, CliError> = match &args.command {
        Command::Sort => Ok(cli::cmd_sort(&config)),
        Command::Sum => Ok(cli::cmd_sum(&config)),
        Command::Horner => Ok(cli::cmd_horner(&config)),
        Command::Sumsq => cli::cmd_sumsq(&config),
        Command::Prodcons => cli::cmd_prodcons(&config),
        Command::Wave { net, inputs } => cli::cmd_wave(&WaveTarget::parse(net), inputs, &config),
    };
    match result {
        Ok(report) => {
            print!("{}", report.text);
            if !report.passed {
                eprintln!("verification failed");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
