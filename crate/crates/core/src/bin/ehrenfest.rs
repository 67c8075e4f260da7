use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ehrenfest::output::{emit, from_csv, summary_json};
use ehrenfest::{compare, run_scenario, Error, Scenario};

#[derive(Parser)]
#[command(
    name = "ehrenfest",
    version,
    about = "Classical, semiclassical and quantum paths of a coherent state"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Skip the grid propagation (quantum columns stay empty).
        #[arg(long)]
        no_quantum: bool,
    },
    /// Run a built-in scenario: free, linear, harmonic, cubic, figure1-hbar005, figure1-hbar01.
    Preset {
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_quantum: bool,
    },
    /// Print the comparison summary of a previously written CSV.
    Compare {
        #[arg(long)]
        csv: PathBuf,
    },
}

fn execute(scenario: Scenario, no_quantum: bool, out: PathBuf) -> Result<(), Error> {
    let mut scenario = scenario;
    if no_quantum {
        scenario.quantum.enabled = false;
    }
    let record = run_scenario(&scenario)?;
    let summary = if record.has_quantum() {
        match compare(&record) {
            Ok(s) => Some(s),
            Err(e) => {
                eprintln!("note: no comparison summary: {e}");
                None
            }
        }
    } else {
        None
    };
    let mut written = emit(&record, summary.as_ref(), &out)?;
    let mut echo = out.clone().into_os_string();
    echo.push(".scenario");
    std::fs::write(&echo, scenario.to_config())?;
    written.push(echo.into());
    for path in written {
        println!("wrote {}", path.display());
    }
    if let Some(s) = summary {
        println!("{}", summary_json(&s)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            no_quantum,
        } => Scenario::load(&config)
            .map_err(|e| match e {
                // unreadable config is a config problem, not an output failure
                Error::Io(io) => Error::invalid_config(config.display().to_string(), io.to_string()),
                other => other,
            })
            .and_then(|s| execute(s, no_quantum, out)),
        Command::Preset { name, out, no_quantum } => Scenario::preset(&name).and_then(|s| execute(s, no_quantum, out)),
        Command::Compare { csv } => std::fs::read_to_string(&csv)
            .map_err(|e| Error::Csv(format!("{}: {e}", csv.display())))
            .and_then(|text| from_csv(&text))
            .and_then(|record| compare(&record))
            .and_then(|s| summary_json(&s))
            .map(|json| println!("{json}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
