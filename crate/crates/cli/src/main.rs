use clap::{Parser, Subcommand};
use radop_cli::config::ExperimentConfig;
use radop_cli::report::Verdict;
use radop_cli::suites;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "radop", version, about = "Verification runs for the radial operator lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites requested by a config file and write the bundle.
    Run {
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the summary table of an existing bundle.
    Report { bundle: PathBuf },
    /// Parse and validate a config file without running anything.
    Validate { config: PathBuf },
}

/// Exit codes: 0 all pass / bounded-surrogate, 1 any failed claim,
/// 2 usage or input error.
fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // ignore the error if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Run { config, seed, out } => {
            let mut config = ExperimentConfig::load(&config).map_err(|e| e.to_string())?;
            if let Some(seed) = seed {
                config.run.seed = seed;
            }
            if let Some(out) = out {
                config.run.output_dir = out;
            }
            let report = suites::run_config(&config).map_err(|e| e.to_string())?;
            print!("{}", report.render());
            println!("bundle written to {}", config.run.output_dir.display());
            Ok(if report.any_fail() { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Report { bundle } => {
            let report = suites::load_bundle(&bundle).map_err(|e| e.to_string())?;
            print!("{}", report.render());
            let has_fail = report.claims.iter().any(|c| c.verdict == Verdict::Fail);
            Ok(if has_fail { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Validate { config } => {
            ExperimentConfig::load(&config).map_err(|e| e.to_string())?;
            println!("config ok");
            Ok(ExitCode::SUCCESS)
        }
    }
}
