use std::path::PathBuf;
use std::process::ExitCode;

use chernoff_cli::{run, Command};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "chernoff",
    version,
    about = "Chernoff-iterated Gaussian-integral solver for parabolic equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the final field for the largest step count.
    Solve(Args),
    /// Write the sup-error against the oracle for each step count.
    Converge(Args),
    /// Run the property battery; exit 1 if any check fails.
    Verify(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; falls back to `output` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the Monte Carlo seed and seeds the random fields of `verify`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the grid map (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, args) = match cli.command {
        Cmd::Solve(a) => (Command::Solve, a),
        Cmd::Converge(a) => (Command::Converge, a),
        Cmd::Verify(a) => (Command::Verify, a),
    };
    if let Some(k) = args.threads {
        if k == 0 {
            eprintln!("config error in `threads`: must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("failed to start thread pool: {e}");
            return ExitCode::from(3);
        }
    }
    match run(command, &args.config, args.out.as_deref(), args.seed) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
