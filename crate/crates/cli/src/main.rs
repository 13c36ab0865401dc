//! satbandit: satisficing bandit benchmark harness.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration
//! error, 3 infeasible objective.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use satbandit_cli::config::{parse_config, ConfigError, RunPlan};
use satbandit_cli::presets::preset_plan;
use satbandit_cli::runner::{bounds_plan, run_plan};

#[derive(Parser)]
#[command(
    name = "satbandit",
    about = "Satisficing multi-armed bandit simulations, bounds, and figure reproductions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed (default 42; the SATBANDIT_SEED variable overrides the
    /// default when this flag is absent).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the number of trials.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Override the horizon.
    #[arg(long, global = true)]
    horizon: Option<u64>,

    /// Output directory for result files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Parallel trial workers (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Monte Carlo simulation described by a config file.
    Run { config: PathBuf },
    /// Emit theoretical bound curves only, without simulating.
    Bounds { config: PathBuf },
    /// Run a built-in preset: fig1, fig2, fig3, fig4, or fig5.
    Reproduce { preset: String },
    /// Parse and feasibility-check a config without running it.
    Validate { config: PathBuf },
}

fn effective_seed(flag: Option<u64>) -> Option<u64> {
    flag.or_else(|| {
        std::env::var("SATBANDIT_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
}

fn load_plan(cli: &Cli) -> Result<(RunPlan, String), ConfigError> {
    let (plan, command) = match &cli.command {
        Command::Run { config } | Command::Bounds { config } | Command::Validate { config } => {
            let verb = match &cli.command {
                Command::Run { .. } => "run",
                Command::Bounds { .. } => "bounds",
                _ => "validate",
            };
            // A preset name works anywhere a config path does.
            let plan = match config.to_str().filter(|_| !config.exists()) {
                Some(name) if satbandit_cli::presets::preset_text(name).is_some() => {
                    preset_plan(name)?
                }
                _ => parse_config(config)?,
            };
            (plan, format!("{verb} {}", config.display()))
        }
        Command::Reproduce { preset } => (preset_plan(preset)?, format!("reproduce {preset}")),
    };
    let plan = plan.with_overrides(effective_seed(cli.seed), cli.trials, cli.horizon);
    plan.validate()?;
    Ok((plan, command))
}

fn execute(cli: &Cli) -> Result<(), ConfigError> {
    let (plan, command) = load_plan(cli)?;
    match &cli.command {
        Command::Validate { .. } => {
            println!(
                "ok: {} problem(s), {} arms, horizon {}, {} trials, seed {}",
                plan.entries.len(),
                plan.entries[0].config.instance.arm_count(),
                plan.entries[0].config.horizon,
                plan.entries[0].config.trials,
                plan.master_seed()
            );
            Ok(())
        }
        Command::Bounds { .. } => {
            let outputs = bounds_plan(&plan, &cli.out, &command)?;
            for path in outputs {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Run { .. } | Command::Reproduce { .. } => {
            let outputs = run_plan(&plan, cli.jobs, &cli.out, &command)?;
            for path in outputs {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                ConfigError::Core(satbandit::Error::InfeasibleObjective(_)) => ExitCode::from(3),
                ConfigError::Syntax(_) | ConfigError::Field { .. } => ExitCode::from(2),
                ConfigError::Core(satbandit::Error::InvalidArgument(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
