use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use shotnoise_cli::{
    emit_report, execute, parse_config, scheme_listing, summary, Command, Overrides,
};

#[derive(Parser)]
#[command(
    name = "shotnoise",
    version,
    about = "Monte Carlo shot-noise experiments under two noise models"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run one experiment.
    Run(Common),
    /// Run an experiment over a list of powers and fit variance against power.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Sweep under both noise models instead of the configured one.
        #[arg(long)]
        both_models: bool,
    },
    /// Run the configured scheme under both models and compare.
    Compare(Common),
    /// List the available detection schemes.
    Schemes,
}

#[derive(Args)]
struct Common {
    /// Experiment config file.
    #[arg(long, short)]
    config: PathBuf,
    /// Output directory for report.csv and report.json.
    #[arg(long, short, default_value = "out")]
    out: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Warn about unknown config keys instead of failing.
    #[arg(long)]
    lenient: bool,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    threads: Option<usize>,
}

fn run(common: Common, command: Command) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&common.config)
        .with_context(|| format!("cannot read config {}", common.config.display()))?;
    let parsed = parse_config(&text, common.lenient)
        .with_context(|| format!("invalid config {}", common.config.display()))?;
    for warning in &parsed.warnings {
        eprintln!("warning: {warning}");
    }
    let overrides = Overrides {
        seed: common.seed,
        samples: common.samples,
    };
    let doc = match common.threads {
        Some(0) => anyhow::bail!("--threads must be at least 1"),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("cannot start thread pool")?
            .install(|| execute(command, &parsed, overrides))?,
        None => execute(command, &parsed, overrides)?,
    };
    let (csv, json) = emit_report(&doc, &common.out)?;
    print!("{}", summary(&doc));
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Sub::Run(common) => run(common, Command::Run),
        Sub::Sweep {
            common,
            both_models,
        } => run(common, Command::Sweep { both_models }),
        Sub::Compare(common) => run(common, Command::Compare),
        Sub::Schemes => {
            print!("{}", scheme_listing());
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
