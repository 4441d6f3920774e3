//! `normctl`: experiment drivers for norm-controlled inversion.
//!
//! Exit status: 0 on success, 1 on domain or runtime failure, 2 on usage or
//! configuration errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "normctl", version, about = "Norm control for inverses in differential subalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Algebra pair: `c1`, `approx`, `wiener`, inline JSON, or a JSON file.
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the differential-norm constant on seeded random pairs.
    VerifyDiffnorm {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 32)]
        max_degree: usize,
    },
    /// Invert an element file and report every bound on its inverse.
    Invert {
        element: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000_000)]
        kmax: u64,
        /// Structure constant; certified from samples when absent.
        #[arg(long)]
        structure_constant: Option<f64>,
        /// Where to write the bound report; `--out` is used when absent.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Bounds from the three norms alone.
    Bound {
        #[arg(long)]
        norm_a: f64,
        #[arg(long)]
        norm_b: f64,
        #[arg(long)]
        norm_b_inverse: f64,
        #[arg(long, default_value_t = 1.0)]
        structure_constant: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep configuration and write its CSV.
    Sweep {
        config: PathBuf,
        /// Overrides the output path of the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the seed of the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the tolerance of the config.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Randomized lower bound for the visibility function at `delta`.
    Visibility {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Resolvent-norm grid of a matrix element, as CSV.
    Pseudospectrum {
        element: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Points per axis.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// `re_min,re_max,im_min,im_max`; a box around the disc of radius `‖a‖ + δ` by default.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rect: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worked examples.
    #[command(subcommand)]
    Cases(CaseCommand),
}

#[derive(Subcommand, Debug)]
pub enum CaseCommand {
    /// Quotient-rule estimate for `1/f` in `C¹`.
    Quotient {
        element: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The family `1 + ½cos 2πnt` for `n = 1..=n_max`.
    AnFamily {
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tail-function bound on the Wiener norm of the inverse.
    Baskakov {
        element: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000_000)]
        kmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// θ-modified differential inequality on seeded samples.
    Sun {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> anyhow::Result<()> {
        commands::configure_threads()?;
        match cli.command {
            Command::VerifyDiffnorm { common, samples, max_degree } => {
                commands::verify_diffnorm(&common, samples, max_degree)
            }
            Command::Invert { element, common, tol, kmax, structure_constant, emit } => {
                commands::invert(&element, &common, tol, kmax, structure_constant, emit.as_deref())
            }
            Command::Bound { norm_a, norm_b, norm_b_inverse, structure_constant, out } => {
                commands::bound(norm_a, norm_b, norm_b_inverse, structure_constant, out.as_deref())
            }
            Command::Sweep { config, out, seed, tol } => commands::sweep(&config, out.as_deref(), seed, tol),
            Command::Visibility { common, delta, trials } => commands::visibility(&common, delta, trials),
            Command::Pseudospectrum { element, delta, grid, rect, out } => {
                commands::pseudospectrum(&element, delta, grid, rect.as_deref(), out.as_deref())
            }
            Command::Cases(c) => commands::cases(c),
        }
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("normctl: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
