//! Command-line front end: run experiment presets or TOML-described custom
//! experiments, write CSV/JSON reports, and render SVG charts.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sparselms::config::ExperimentConfig;
use sparselms::error::Error;
use sparselms::presets::{preset, resolve_preset, run_experiment, PRESET_NAMES};
use sparselms::report::Report;
use sparselms::svg::render_svg;

#[derive(Parser)]
#[command(
    name = "sparselms",
    about = "Sparse channel estimation experiments: penalized LMS family, excess-MSE analysis",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its report files.
    Run(RunArgs),
    /// Print a preset's resolved configuration as TOML.
    ShowConfig(ShowConfigArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Named preset to run (see `show-config` for the catalog).
    #[arg(long, value_parser = PRESET_NAMES, conflicts_with = "config")]
    preset: Option<String>,
    /// TOML experiment description to run instead of a preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed for all random draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo run count.
    #[arg(long)]
    runs: Option<usize>,
    /// Iterations per run.
    #[arg(long)]
    iters: Option<usize>,
    /// Parameter overrides as key=value (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory for report files.
    #[arg(long)]
    out: PathBuf,
    /// Which report formats to write.
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Render an SVG line chart for this metric (e.g. mse, excess_mse).
    #[arg(long, value_name = "METRIC")]
    plot: Option<String>,
    /// Plot with a linear y axis instead of dB.
    #[arg(long)]
    linear: bool,
}

#[derive(Args)]
struct ShowConfigArgs {
    #[arg(long, value_parser = PRESET_NAMES)]
    preset: String,
    /// Parameter overrides as key=value (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Both,
}

fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>, Error> {
    args.iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Config(format!("override '{kv}' is not of the form key=value")))
        })
        .collect()
}

fn resolve(args: &RunArgs) -> Result<(ExperimentConfig, Option<String>), Error> {
    let mut overrides = parse_overrides(&args.set)?;
    // Dedicated flags are sugar for overrides and win over --set.
    if let Some(seed) = args.seed {
        overrides.push(("seed".into(), seed.to_string()));
    }
    if let Some(runs) = args.runs {
        overrides.push(("runs".into(), runs.to_string()));
    }
    if let Some(iters) = args.iters {
        overrides.push(("iterations".into(), iters.to_string()));
    }
    match (&args.preset, &args.config) {
        (Some(name), None) => Ok((resolve_preset(name, &overrides)?, Some(name.clone()))),
        (None, Some(path)) => {
            let mut config = ExperimentConfig::from_toml_file(path)?;
            for (key, value) in &overrides {
                config.apply_override(key, value)?;
            }
            config.validate()?;
            Ok((config, None))
        }
        (None, None) => Err(Error::Config(
            "nothing to run: pass --preset <name> or --config <file>".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    }
}

fn run(args: &RunArgs) -> Result<(), Error> {
    let (config, preset_name) = resolve(args)?;
    std::fs::create_dir_all(&args.out).map_err(|source| Error::Io {
        path: args.out.clone(),
        source,
    })?;

    let started = Instant::now();
    let mut report = run_experiment(&config)?;
    report.metadata.preset = preset_name;
    let elapsed = started.elapsed().as_secs_f64();

    let stem = report.metadata.name.clone();
    if args.format != Format::Json {
        let csv_path = args.out.join(format!("{stem}.csv"));
        report.write_csv(&csv_path)?;
        println!("wrote {}", csv_path.display());
        if !report.analysis.is_empty() {
            let analysis_path = args.out.join(format!("{stem}_analysis.csv"));
            report.write_analysis_csv(&analysis_path)?;
            println!("wrote {}", analysis_path.display());
        }
    }
    if args.format != Format::Csv {
        let json_path = args.out.join(format!("{stem}.json"));
        report.write_json(&json_path)?;
        println!("wrote {}", json_path.display());
    }
    if let Some(metric) = &args.plot {
        let svg_path = args.out.join(format!("{stem}_{metric}.svg"));
        render_svg(&report, metric, !args.linear, &svg_path)?;
        println!("wrote {}", svg_path.display());
    }

    print_summary(&report, elapsed);
    Ok(())
}

fn print_summary(report: &Report, elapsed: f64) {
    println!(
        "{}: {} runs x {} iterations, seed {}, completed in {:.2}s",
        report.metadata.name,
        report.metadata.runs,
        report.metadata.iterations,
        report.metadata.seed,
        elapsed
    );
    if report.metadata.diverged_runs > 0 {
        println!(
            "warning: {} trial(s) diverged and were excluded from the averages",
            report.metadata.diverged_runs
        );
    }
    if !report.series.is_empty() && report.metadata.iterations > 0 {
        println!("steady-state {} (trailing-window mean):", report
            .series
            .first()
            .map(|s| s.metric.as_str())
            .unwrap_or("metric"));
        for s in &report.series {
            if let Some(steady) = s.steady_state {
                println!("  {:<12} {:.6e}", s.label, steady);
            }
        }
    }
    if !report.analysis.is_empty() {
        println!("analysis (per sparsity level):");
        println!("  {:>2}  {:>9}  {:>12}  {:>12}  {:>12}", "S", "alpha'", "beta'", "xi_rl1_pred", "rho*");
        for a in &report.analysis {
            println!(
                "  {:>2}  {:>9.3}  {:>12.4e}  {:>12.4e}  {}",
                a.sparsity,
                a.alpha_prime,
                a.beta_prime,
                a.xi_rl1_predicted,
                a.rho_star.map(|r| format!("{r:.4e}")).unwrap_or_else(|| "-".into()),
            );
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::ShowConfig(args) => (|| {
            let overrides = parse_overrides(&args.set)?;
            let config = if overrides.is_empty() {
                preset(&args.preset)?
            } else {
                resolve_preset(&args.preset, &overrides)?
            };
            print!("{}", config.to_toml());
            Ok(())
        })(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
