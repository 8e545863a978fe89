use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dephase_cli::runner::long_time_metadata;
use dephase_cli::{emit, load_config, run_scenario, selftest, AppError, Format, EXIT_OK};
use qubit_dephasing::dephasing::LongTimeLimit;

#[derive(Parser)]
#[command(name = "dephase", version, about = "Qubit pure-dephasing scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the configured time grid and write the results.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the ohmicity class and long-time values.
    Limits {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the built-in analytic checks.
    Selftest,
}

fn show(limit: Option<LongTimeLimit>) -> String {
    match limit {
        None => "undefined".into(),
        Some(LongTimeLimit::Vanishes) => "0 (vanishes)".into(),
        Some(LongTimeLimit::Value(v)) => format!("{v:.11e}"),
    }
}

fn execute(command: Command) -> Result<(), AppError> {
    match command {
        Command::Run { config, output, format } => {
            let cfg = load_config(&config)?;
            let table = run_scenario(&cfg)?;
            emit(&table, format, output.as_deref()).map_err(|source| AppError::Io {
                path: output.unwrap_or_else(|| PathBuf::from("<stdout>")),
                source,
            })
        }
        Command::Limits { config } => {
            let cfg = load_config(&config)?;
            let limits = long_time_metadata(&cfg)?;
            let class = limits
                .ohmicity
                .map_or_else(|| "undeclared".to_owned(), |c| c.to_string());
            println!("ohmicity: {class}");
            println!("long_time_a0: {}", show(limits.long_time_a0));
            println!("long_time_coherence: {}", show(limits.long_time_coherence));
            Ok(())
        }
        Command::Selftest => {
            let checks = selftest::run_selftest();
            let mut failed = Vec::new();
            for c in &checks {
                match &c.outcome {
                    Ok(()) => println!("ok    {}", c.name),
                    Err(e) => {
                        println!("FAIL  {}: {e}", c.name);
                        failed.push(c.name);
                    }
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(AppError::Selftest(failed.join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("dephase: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
