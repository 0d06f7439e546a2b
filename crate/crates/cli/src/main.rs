//! `sl2orbit`: exact SL₂-orbit data, series expansions and height
//! asymptotics for problem files.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "sl2orbit", version, about = "Exact SL2-orbit computations for degenerating mixed Hodge structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Problem file (TOML).
    pub path: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the mixed Hodge conditions and admissibility of the orbit.
    Validate(Common),
    /// Deligne bigrading I^{p,q} of (F, W) and the δ-splitting.
    Bigrade(Common),
    /// Relative weight filtration, δ-splitting of the limit and F_o.
    Split(Common),
    /// The sl2-triple (N0, H, N0+), N_-2 and the gradings relY, Y.
    Sl2(Common),
    /// Series expansion g(y), β(y) with its residual report.
    ///
    /// CSV columns: y, residual, exact_zero (distance between e^{iyN}.F and
    /// g(y)e^{iyN}.F̂ in the metric at F_o).
    Orbit {
        #[command(flatten)]
        common: Common,
        /// Truncation order n_max.
        #[arg(long, default_value_t = 4)]
        order: u32,
        /// Comma-separated rational values of y for extra residual samples.
        #[arg(long, value_delimiter = ',')]
        samples: Vec<String>,
        /// Write residual samples to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Residuals at the largest sample above this value are reported.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Norm estimates ‖v‖² ~ y^k along the orbit.
    ///
    /// CSV columns: k, vector, y, ratio (ratio left empty where e^{iyN}.F is
    /// not yet a mixed Hodge structure).
    Norms {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        order: u32,
        /// Comma-separated rational values of y.
        #[arg(long, value_delimiter = ',')]
        samples: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sectional curvature at F_o along ξ = ¼(iH + N0 + N0+).
    Curvature(Common),
    /// Height slope μ along s_j = t^{a_j} and jump detection.
    ///
    /// CSV columns: s, asymptote (−μ log s), closed_form (empty when the
    /// problem has none).
    Height {
        #[command(flatten)]
        common: Common,
        /// Comma-separated positive integers a_1,...,a_r (default all 1).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        exponents: Vec<i64>,
        /// Comma-separated values of |s| in (0, 1) for the CSV table.
        #[arg(long, value_delimiter = ',')]
        curve_samples: Vec<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Limiting grading Y_∞ = e^{iδ}.Y and its approach along the orbit.
    ///
    /// CSV columns: y, gap (largest entry of e^{-iyN}.Y_(F(iy),W) − Y_∞).
    GradingLimit {
        #[command(flatten)]
        common: Common,
        /// Comma-separated rational values of y.
        #[arg(long, value_delimiter = ',')]
        samples: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Gap allowed at the largest sample.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command) {
        Ok(out) => {
            print!("{}", out);
            ExitCode::SUCCESS
        }
        Err(commands::Failure { report, error }) => {
            if let Some(r) = report {
                print!("{}", r);
            }
            eprintln!("error: {}", error);
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
