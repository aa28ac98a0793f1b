mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lattice_optima::Error;

use crate::output::{render, Format};

#[derive(Debug, Parser)]
#[command(name = "lattice-optima", version, about = "Energies and optimal shapes of two-dimensional Bravais lattices")]
pub struct Cli {
    /// Potential spec: a JSON file path, or inline JSON starting with `{`.
    #[arg(long, short = 'p', global = true)]
    pub potential: Option<String>,

    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,

    /// Relative accuracy target for series and quadrature.
    #[arg(long, default_value_t = 1e-10, global = true)]
    pub tol: f64,

    /// Lattice-point budget per series evaluation.
    #[arg(long, default_value_t = 1_000_000, global = true)]
    pub max_terms: u64,

    /// Worker threads, 0 for one per core.
    #[arg(long, env = "LATTICE_OPTIMA_THREADS", default_value_t = 0, global = true)]
    pub threads: usize,

    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Write output to this file instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SearchArgs {
    /// Points per axis of the shape grid.
    #[arg(long, default_value_t = 60)]
    pub grid: usize,
    /// Initial upper limit for the shape coordinate y.
    #[arg(long, default_value_t = 8.0)]
    pub y_cap: f64,
    /// Number of best grid points refined by the simplex method.
    #[arg(long, default_value_t = 5)]
    pub starts: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub shape_tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice energy by direct summation and by the theta integral.
    Energy {
        /// Shape `x,y` (any y > 0, reduced automatically), or `triangular` / `square`.
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        area: f64,
    },
    /// Lattice theta function `sum exp(-2 pi alpha |p|^2)`.
    Theta {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        area: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Epstein zeta of the square or triangular lattice.
    Zeta {
        #[arg(long, value_enum)]
        shape: commands::ShapeArg,
        #[arg(long = "two-s")]
        two_s: f64,
        #[arg(long, default_value_t = 1.0)]
        area: f64,
    },
    /// Sufficient condition for triangular optimality at a fixed area.
    Check {
        #[arg(long)]
        area: f64,
    },
    /// Every applicable area bound and global check for the potential.
    Bounds,
    /// Best lattice shape at a fixed area.
    Minimize {
        #[arg(long)]
        area: f64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Best lattice over all shapes and areas, for potentials with a well.
    GlobalMin {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Lennard-Jones-type global minimizers, `(y_min, r, d)` per `(x1, x2)`.
    Table1 {
        /// Pairs `x1:x2` separated by commas; defaults to the standard twelve.
        #[arg(long)]
        pairs: Option<String>,
        /// Coefficients `a1,a2`.
        #[arg(long, default_value = "1,1")]
        a: String,
    },
    /// Critical densities below which the square lattice beats the triangular one.
    Table2 {
        /// Pairs `x1:x2` separated by commas; defaults to the standard grid.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Areas where the square lattice beats the triangular one for a convex decreasing potential.
    Counterexample {
        /// Use plain lattice sums over the box |m|, |n| <= N instead of exact zeta values.
        #[arg(long = "box")]
        box_n: Option<i64>,
    },
    /// Fixed-area minimizer classification along a range of areas.
    Scan {
        #[arg(long)]
        area_from: f64,
        #[arg(long)]
        area_to: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Space the areas geometrically instead of uniformly.
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// `(x, value)` series of the potential, of g_A, or of h.
    Plotdata {
        #[arg(long, value_enum)]
        what: commands::PlotWhat,
        /// `lo,hi`
        #[arg(long)]
        range: String,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        /// Area for g_A.
        #[arg(long)]
        area: Option<f64>,
    },
    /// Compares random lattices of one area against the triangular lattice.
    Verify {
        #[arg(long)]
        area: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

/// A failure together with the exit code it maps to.
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_validation() { 2 } else { 3 },
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "invalid_argument",
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let result = commands::run(&cli).map(|r| render(&r, cli.format));
    match result {
        Ok(text) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
                None => std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    ExitCode::from(3)
                }
            }
        }
        Err(f) => {
            eprintln!("error ({}): {}", f.kind, f.message);
            if cli.format == Format::Json {
                let doc = serde_json::json!({
                    "schema": output::SCHEMA_VERSION,
                    "error": {"kind": f.kind, "message": f.message, "exit_code": f.code},
                });
                println!("{doc}");
            }
            ExitCode::from(f.code)
        }
    }
}
