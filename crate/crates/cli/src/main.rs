use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use varcone::MAX_DIM;
use varcone_cli::runner::{EXIT_INPUT, EXIT_PASS};
use varcone_cli::{galleries, parse, run, RunOptions, Scenario};

#[derive(Parser)]
#[command(name = "varcone", version, about = "Exact tangent-cone, transversality and subdifferential certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the seed of every sampling task.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run tasks (and their inner loops) in parallel.
    #[arg(long, global = true)]
    parallel: bool,
    /// Print only the JSON report.
    #[arg(long, global = true)]
    json_only: bool,
    /// Reject inputs above this ambient dimension.
    #[arg(long, global = true, default_value_t = MAX_DIM)]
    max_dim: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run { file: PathBuf },
    /// Print a built-in scenario, or run it with --run.
    Gallery {
        name: String,
        #[arg(long)]
        run: bool,
    },
    /// List the built-in scenarios.
    ListGalleries,
    /// Parse and resolve a scenario without running it.
    Validate { file: PathBuf },
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT as u8)
}

fn load(path: &PathBuf, max_dim: usize) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let scenario = parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    scenario.validate(max_dim).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(scenario)
}

fn execute(cli: &Cli, scenario: &Scenario) -> ExitCode {
    let report = run(scenario, &RunOptions { seed: cli.seed, parallel: cli.parallel });
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if cli.json_only {
        println!("{json}");
    } else {
        print!("{}", report.render_text());
        println!("{json}");
    }
    ExitCode::from(report.summary.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run { file } => match load(file, cli.max_dim) {
            Ok(s) => execute(&cli, &s),
            Err(e) => input_error(e),
        },
        Command::Validate { file } => match load(file, cli.max_dim) {
            Ok(s) => {
                println!("ok: {} tasks", s.tasks.len());
                ExitCode::from(EXIT_PASS as u8)
            }
            Err(e) => input_error(e),
        },
        Command::Gallery { name, run } => match galleries::build(name) {
            None => input_error(galleries::unknown_message(name)),
            Some(s) if *run => match s.validate(cli.max_dim) {
                Ok(()) => execute(&cli, &s),
                Err(e) => input_error(e),
            },
            Some(s) => {
                println!("{}", serde_json::to_string_pretty(&s).expect("scenario serializes"));
                ExitCode::from(EXIT_PASS as u8)
            }
        },
        Command::ListGalleries => {
            for (name, description) in galleries::NAMES {
                println!("{name:<34} {description}");
            }
            ExitCode::from(EXIT_PASS as u8)
        }
    }
}
