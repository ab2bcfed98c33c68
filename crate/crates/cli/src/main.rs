mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use table::Format;

#[derive(Parser, Debug)]
#[command(
    name = "bargmann",
    version,
    about = "Spectra, trace sums, transforms and evolution in Fock space"
)]
struct Cli {
    /// Write the table here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of a truncated operator.
    Spectrum {
        /// Spec JSON file, or a preset name (number, heun, gribov).
        #[arg(long)]
        spec: String,
        #[arg(long)]
        dim: usize,
        /// Compare against the 2N truncation and mark converged eigenvalues.
        #[arg(long)]
        double_check: bool,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Regularized trace sums over a family of contours.
    Trace {
        /// Leading power of A*^k A^k.
        #[arg(long)]
        k: u32,
        /// Perturbation B; a leading part other than A*^k A^k is kept as a term.
        #[arg(long)]
        spec: String,
        /// Number of Neumann terms; defaults to max(1, 2(k − 1)).
        #[arg(long)]
        l: Option<u32>,
        #[arg(long, default_value_t = 10)]
        contours: usize,
        /// Index of the first contour; defaults to 2k − 1.
        #[arg(long)]
        first: Option<usize>,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 400)]
        dim: usize,
    },
    /// Coefficients of a transformed signal on the target basis.
    Transform {
        /// Samples as CSV with columns u,re,im.
        #[arg(long, conflicts_with = "hermite", required_unless_present = "hermite")]
        input: Option<PathBuf>,
        /// Preimage-basis coefficients as CSV with columns re,im.
        #[arg(long)]
        hermite: Option<PathBuf>,
        /// Use the α-kernel instead of the classical one.
        #[arg(long)]
        alpha: Option<f64>,
        /// Gauss–Hermite order used for callable input.
        #[arg(long, default_value_t = 64)]
        order: usize,
        /// Number of coefficients to extract.
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// RK4 integration of ∂_t φ = ±Gφ.
    Evolve {
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
        /// Initial coefficients as CSV with columns re,im.
        #[arg(long)]
        initial: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        dt: f64,
        /// Record every `stride` steps; 0 keeps only the end points.
        #[arg(long, default_value_t = 0)]
        stride: usize,
    },
    /// Jacobi matrix tools.
    Jacobi {
        /// Entries of the kernel solution ã_1..ã_N.
        #[arg(long, conflicts_with = "tridiag", required_unless_present = "tridiag")]
        kernel_solution: Option<usize>,
        /// Spectral data of a tridiagonal matrix given as JSON {a, b, c}.
        #[arg(long)]
        tridiag: Option<PathBuf>,
    },
    /// Print a preset spec as JSON.
    Preset { name: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bargmann: {e}");
            ExitCode::from(e.code())
        }
    }
}
