use std::path::PathBuf;
use std::process::ExitCode;

use biharm::harness::{
    image_stage, load_data, run_experiment, save_data, simulate_stage, validate_suite, write_run_files,
    ExperimentConfig, Level, RunReport, ValidationOptions,
};
use biharm::imaging::IndicatorId;
use biharm::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "biharm", version, about = "Biharmonic wave scattering: simulate, image, validate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment file; without one the built-in example named by --example is used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scene: 1 (circle), 2 (kite), 3 (circle and kite).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    example: u8,
    /// Overrides noise.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the measurements (with noise) and save them as data files.
    Simulate(RunArgs),
    /// Image from data files saved by `simulate`.
    Image {
        #[command(flatten)]
        run: RunArgs,
        /// Directory holding the data files (defaults to the output directory).
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Simulate and image in one run.
    Reconstruct(RunArgs),
    /// Run the validation suite.
    Validate {
        #[arg(long, default_value = "fast")]
        level: String,
        /// Negate one indicator's prefactor, to see the suite catch it.
        #[arg(long)]
        flip_sign: Option<usize>,
        /// Also write the report (with timings) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut c = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => match args.example {
            1 => ExperimentConfig::example1(),
            2 => ExperimentConfig::example2(),
            _ => ExperimentConfig::example3(),
        },
    };
    if let Some(seed) = args.seed {
        c.seed = seed;
    }
    if let Some(out) = &args.out {
        c.output_dir = out.clone();
    }
    c.validate()?;
    Ok(c)
}

fn print(report: &RunReport) {
    for line in report.lines() {
        println!("{line}");
    }
    for t in &report.timings {
        eprintln!("{}: {:.2} s", t.stage, t.seconds);
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let report = match cli.command {
        Command::Simulate(args) => {
            let config = load_config(&args)?;
            let mut report = RunReport::default();
            let sets = simulate_stage(&config, &mut report)?;
            save_data(&config.output_dir, &sets)?;
            println!("data written to {}", config.output_dir.display());
            report
        }
        Command::Image { run, data } => {
            let config = load_config(&run)?;
            let dir = data.unwrap_or_else(|| config.output_dir.clone());
            let sets = load_data(&config, &dir)?;
            let mut report = RunReport::default();
            image_stage(&config, &sets, &mut report)?;
            write_run_files(&config, &report)?;
            report
        }
        Command::Reconstruct(args) => run_experiment(&load_config(&args)?)?,
        Command::Validate { level, flip_sign, out } => {
            let mut opts = ValidationOptions::new(Level::parse(&level)?);
            opts.flipped_sign = flip_sign.map(IndicatorId::new).transpose()?;
            let report = validate_suite(&opts);
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                report.write(&dir.join("validation.json"), true)?;
            }
            report
        }
    };
    print(&report);
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("BHM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
