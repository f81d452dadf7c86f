use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use casir::commands::bench::BenchOpts;
use casir::commands::roundtrip::RoundtripOpts;
use casir::commands::{bench, recover, roundtrip, sample};
use casir::config::CommonArgs;
use casir::{AppError, AppResult};

/// Content-adaptive sparse image sampling and cellular-automaton recovery.
#[derive(Parser)]
#[command(name = "casir", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a PGM image into a mask, a subsampled image, and a report.
    Sample {
        /// Input image (binary PGM, maxval 255).
        #[arg(long)]
        input: PathBuf,
        /// Output directory.
        #[arg(long = "out-dir", default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Recover an image from a mask and a subsampled PGM.
    Recover {
        /// Sampling mask (plain PBM).
        #[arg(long)]
        mask: PathBuf,
        /// Subsampled image (binary PGM).
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "out-dir", default_value = ".")]
        out_dir: PathBuf,
        /// Write one PGM (and mask PBM) per CA generation.
        #[arg(long)]
        snapshots: bool,
        /// Skip the conditional post-smoother (equals --rho 0).
        #[arg(long = "no-postprocess")]
        no_postprocess: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample, optionally add measurement noise, recover, and print metrics.
    Roundtrip {
        /// Input image (binary PGM, maxval 255).
        #[arg(long)]
        input: PathBuf,
        /// Also write mask/sampled/recovered artifacts here.
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
        /// Write the CSV (header + row) to this file as well.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Replace the adaptive sampler with a pure-random mask at this
        /// rate in [0, 1].
        #[arg(long = "baseline-random", value_name = "RATE")]
        baseline_random: Option<f64>,
        #[arg(long)]
        snapshots: bool,
        #[arg(long = "no-postprocess")]
        no_postprocess: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the pipeline over a directory of PGM images.
    Bench {
        /// Directory holding .pgm images.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long = "out-dir", default_value = ".")]
        out_dir: PathBuf,
        /// Also run the matched-rate random baseline per image.
        #[arg(long = "with-baseline")]
        with_baseline: bool,
        #[arg(long = "no-postprocess")]
        no_postprocess: bool,
        /// Sweep values for c, comma separated (writes sweep_c.csv).
        #[arg(long = "sweep-c", value_delimiter = ',')]
        sweep_c: Vec<f64>,
        /// Sweep values for tau (writes sweep_tau.csv).
        #[arg(long = "sweep-tau", value_delimiter = ',')]
        sweep_tau: Vec<f64>,
        /// Sweep values for rho (writes sweep_rho.csv).
        #[arg(long = "sweep-rho", value_delimiter = ',')]
        sweep_rho: Vec<f64>,
        /// Sweep values for the noise variance (writes sweep_noise_var.csv).
        #[arg(long = "sweep-noise-var", value_delimiter = ',')]
        sweep_noise_var: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn init_threads(threads: Option<usize>) -> AppResult<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(AppError::invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| AppError::runtime(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> AppResult<()> {
    match cli.command {
        Command::Sample {
            input,
            out_dir,
            common,
        } => {
            let resolved = common.resolve()?;
            init_threads(resolved.threads)?;
            sample::run(&input, &out_dir, &resolved.params)
        }
        Command::Recover {
            mask,
            input,
            out_dir,
            snapshots,
            no_postprocess,
            common,
        } => {
            let resolved = common.resolve()?;
            init_threads(resolved.threads)?;
            recover::run(
                &mask,
                &input,
                &out_dir,
                &resolved.params,
                no_postprocess || resolved.no_postprocess,
                snapshots || resolved.snapshots,
            )
        }
        Command::Roundtrip {
            input,
            out_dir,
            csv,
            baseline_random,
            snapshots,
            no_postprocess,
            common,
        } => {
            let resolved = common.resolve()?;
            init_threads(resolved.threads)?;
            let out_dir = out_dir.or_else(|| resolved.out_dir.clone());
            let csv = csv.or_else(|| resolved.csv.clone());
            let opts = RoundtripOpts {
                out_dir: out_dir.as_deref(),
                csv: csv.as_deref(),
                baseline_random: baseline_random.or(resolved.baseline_random),
                snapshots: snapshots || resolved.snapshots,
                no_postprocess: no_postprocess || resolved.no_postprocess,
            };
            roundtrip::run(&input, &resolved.params, &opts)
        }
        Command::Bench {
            corpus,
            out_dir,
            with_baseline,
            no_postprocess,
            sweep_c,
            sweep_tau,
            sweep_rho,
            sweep_noise_var,
            common,
        } => {
            let resolved = common.resolve()?;
            init_threads(resolved.threads)?;
            let opts = BenchOpts {
                out_dir,
                with_baseline,
                no_postprocess: no_postprocess || resolved.no_postprocess,
                sweep_c,
                sweep_tau,
                sweep_rho,
                sweep_noise_var,
            };
            bench::run(&corpus, &resolved.params, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
