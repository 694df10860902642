use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wsncluster::output::format_number;
use wsncluster::{config, emit_results, run_scenario_parallel, OutputBundle};
use wsncluster_core::fuzzy::FuzzySystem;
use wsncluster_core::protocol::Protocol;
use wsncluster_core::sim::{relative_improvement, AggregateResult};

#[derive(Parser)]
#[command(
    name = "wsncluster",
    version,
    about = "LEACH vs fuzzy competition-radius clustering lifetime simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run paired trials and write CSV results.
    Run {
        /// Scenario file, or `scenario1` / `scenario2` for the built-ins.
        #[arg(long, default_value = "scenario1")]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        protocol: Which,
        /// Overrides `scenario.trials`.
        #[arg(long)]
        trials: Option<usize>,
        /// Overrides `scenario.base_seed`.
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=i64::MAX as u64))]
        seed: Option<u64>,
    },
    /// Print the competition radius for normalized distance and energy.
    Radius {
        /// Distance to the base station over the maximum possible distance, in [0, 1].
        #[arg(long, allow_negative_numbers = true)]
        distance: f64,
        /// Residual over initial energy, in [0, 1].
        #[arg(long, allow_negative_numbers = true)]
        energy: f64,
        /// Maximum competition radius, meters.
        #[arg(long = "r-max")]
        r_max: f64,
        /// Take membership functions (and rules) from this scenario file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// `repaired`, `printed`, or a TOML file with a `[fuzzy] rules` table.
        #[arg(long)]
        rules: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Leach,
    Fca,
    Both,
}

impl Which {
    fn protocols(self) -> &'static [Protocol] {
        match self {
            Which::Leach => &[Protocol::Leach],
            Which::Fca => &[Protocol::Fca],
            Which::Both => &Protocol::ALL,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            out,
            protocol,
            trials,
            seed,
        } => run(config, out, protocol, trials, seed),
        Command::Radius {
            distance,
            energy,
            r_max,
            config,
            rules,
        } => radius(distance, energy, r_max, config, rules),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

type BoxError = Box<dyn std::error::Error>;

fn run(
    config_path: PathBuf,
    out: PathBuf,
    which: Which,
    trials: Option<usize>,
    seed: Option<u64>,
) -> Result<(), BoxError> {
    let mut config = config::load_config(&config_path)?;
    if let Some(t) = trials {
        config.trials = t;
    }
    if let Some(s) = seed {
        config.base_seed = s;
    }
    let result = run_scenario_parallel(&config, which.protocols())
        .map_err(|e| format!("{}: {e}", config_path.display()))?;
    print_summary(&result);
    let bundle = OutputBundle::new(&result, &config)?;
    let written = emit_results(&bundle, &out)?;
    println!("wrote {} files to {}", written.len(), out.display());
    Ok(())
}

fn print_summary(result: &AggregateResult) {
    let show = |v: Option<f64>| v.map_or_else(|| "-".to_string(), format_number);
    for p in &result.protocols {
        println!(
            "{:<6} FND {:>8} ± {:<8} HNA {:>8} ± {:<8} FND win rate {}",
            p.protocol.name(),
            show(p.fnd.mean),
            show(p.fnd.std_dev),
            show(p.hna.mean),
            show(p.hna.std_dev),
            show(p.win_rate_fnd),
        );
        for (name, m) in [("FND", &p.fnd), ("HNA", &p.hna)] {
            if m.undefined > 0 {
                println!(
                    "       {name} not reached in {} of {} trials",
                    m.undefined,
                    m.undefined + m.defined
                );
            }
        }
    }
    let mean = |p| result.get(p).and_then(|s| s.fnd.mean);
    if let (Some(fca), Some(leach)) = (mean(Protocol::Fca), mean(Protocol::Leach)) {
        println!(
            "FCA FND improvement over LEACH: {}",
            format_number(relative_improvement(fca, leach))
        );
    }
}

fn radius(
    distance: f64,
    energy: f64,
    r_max: f64,
    config_path: Option<PathBuf>,
    rules: Option<String>,
) -> Result<(), BoxError> {
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err("--r-max must be a positive number".into());
    }
    let mut system = match config_path {
        Some(path) => config::load_fuzzy(path)?,
        None => FuzzySystem::default(),
    };
    if let Some(source) = rules {
        system = system.with_rules(config::load_rules(&source)?);
    }
    let r = system.compute_radius(distance, energy, r_max)?;
    println!("{}", format_number(r));
    Ok(())
}
