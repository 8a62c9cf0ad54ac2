use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qspe_cli::{config::Experiment, load, run, CliError};

#[derive(Parser)]
#[command(name = "qspe", version, about = "Simulation sweeps for QSPE gate calibration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory; overrides `output` in the config.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Master seed; overrides `master_seed` in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a config file without running it and print the resolved config.
    Validate { config: PathBuf },
    /// List the experiment ids.
    ListExperiments,
}

fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run { config, threads, output, seed } => {
            let mut cfg = load(&config)?;
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            let dir = output.or_else(|| cfg.output.clone()).ok_or(CliError::NoOutput)?;
            let done = run(&cfg, &config, &dir, threads)?;
            println!("{}: {} points, {} rows -> {}", cfg.experiment, done.points, done.rows, done.output_dir.display());
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!("ok: {}", config.display());
            println!(
                "# {} points x {} repetitions",
                qspe_cli::points(&cfg).len(),
                cfg.effective_repetitions()
            );
            print!("{}", toml::to_string(&cfg).expect("resolved config serializes"));
            Ok(())
        }
        Command::ListExperiments => {
            for e in Experiment::ALL {
                println!("{:<15} {}", e.id(), e.description());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap exits with 2 on usage errors; 2 is reserved for numerical failures here.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
