use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qcollide::experiments::{
    load_config, run_config, run_scenario, LoadedConfig, RunOptions, ScenarioId,
};

#[derive(Parser)]
#[command(
    name = "qcollide",
    version,
    about = "Collision-model simulator: qubit homogenization, memory effects, synchronization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario from the registry.
    Scenario {
        /// Scenario id; see `list`.
        id: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a sweep configuration file (model = sweep).
    Sweep {
        /// Path to the configuration file.
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run any configuration file.
    Run {
        /// Path to the configuration file.
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the scenario registry.
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Polar resolution of the antipodal-pair grid search; enables the
    /// search when either grid flag is given (single-qubit models only).
    #[arg(long)]
    grid_theta: Option<usize>,
    /// Azimuthal resolution of the antipodal-pair grid search.
    #[arg(long)]
    grid_phi: Option<usize>,
    /// Carry the correlated system/next-unit state between non-Markovian
    /// steps instead of the default marginal semantics.
    #[arg(long)]
    joint_carryover: bool,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        let blp_grid = match (self.grid_theta, self.grid_phi) {
            (None, None) => None,
            (theta, phi) => Some((theta.unwrap_or(32), phi.unwrap_or(64))),
        };
        RunOptions {
            joint_carryover: self.joint_carryover,
            blp_grid,
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> qcollide::Result<()> {
    match cli.command {
        Command::Scenario { id, run } => {
            let id: ScenarioId = id.parse()?;
            let manifest = run_scenario(id, &run.out, &run.options())?;
            report(&manifest);
        }
        Command::Sweep { config, out } => {
            let loaded = load_config(&config)?;
            if !matches!(loaded, LoadedConfig::Sweep(_)) {
                return Err(qcollide::Error::Config {
                    key: Some("model".into()),
                    message: "the sweep command needs a config with model = sweep (use `run` for other models)"
                        .into(),
                });
            }
            let manifest = run_config(&loaded, &stem(&config), &out, &RunOptions::default())?;
            report(&manifest);
        }
        Command::Run { config, run } => {
            let loaded = load_config(&config)?;
            let manifest = run_config(&loaded, &stem(&config), &run.out, &run.options())?;
            report(&manifest);
        }
        Command::List => {
            for id in ScenarioId::ALL {
                println!("{:14} {}", id.as_str(), id.describe());
            }
        }
    }
    Ok(())
}

fn stem(path: &std::path::Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".to_string())
}

fn report(manifest: &qcollide::experiments::RunManifest) {
    println!(
        "{}: {} files in {:.2}s",
        manifest.scenario,
        manifest.outputs.len() + 1,
        manifest.duration_seconds
    );
    for path in &manifest.outputs {
        println!("  {}", path.display());
    }
}
