use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use risd2d_cli::{CliError, Overrides};

#[derive(Parser)]
#[command(name = "risd2d", version, about = "Outage analysis and placement/power design for RIS-assisted underlay D2D links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Monte Carlo trials per point.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Root seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment: fig3, fig4, fig5a, fig5b, fig6, fig7, fig8a, fig8b, fig9, fig10 or custom.
    Run { config: PathBuf, experiment: String },
    /// Print the jointly optimal placement and power as JSON.
    Optimize { config: PathBuf },
    /// Run the oracle suite and write `validation.csv`.
    Validate { config: PathBuf },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let ov = Overrides {
        trials: cli.trials,
        seed: cli.seed,
        out: cli.out,
    };
    match cli.command {
        Command::Run { config, experiment } => {
            let s = risd2d_cli::run(&config, &experiment, &ov)?;
            println!("{}", serde_json::to_string_pretty(&s).expect("summary serializes"));
        }
        Command::Optimize { config } => {
            let (report, _) = risd2d_cli::optimize(&config, &ov)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Validate { config } => {
            let s = risd2d_cli::validate(&config, &ov)?;
            println!("{}", serde_json::to_string_pretty(&s).expect("summary serializes"));
            if s.failed > 0 {
                return Err(CliError::ValidationFailed(s.failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.report()).expect("report serializes"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
