//! `henon-lab`: orbit dumps, point classification, verification runs and
//! rendering for the map `F(z, w) = (exp(-z^2) - delta w, z)`.
//!
//! Exit codes: 0 success, 1 verification failures, 2 usage or parse error,
//! 3 point not captured, 4 I/O error.

mod commands;
mod literal;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use literal::{parse_complex, parse_pair, parse_resolution};

#[derive(Debug, Parser)]
#[command(
    name = "henon-lab",
    version,
    about = "Numerical lab for the transcendental Hénon map"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Map parameter, must exceed 2
    #[arg(long, global = true, default_value_t = 3.0, value_parser = parse_delta)]
    delta: f64,
    /// Inner radius R0 of the cone ladder [default: r0_min(delta) * 1.001]
    #[arg(long, global = true)]
    r0: Option<f64>,
    /// Constant C >= 1 of the absorbing set I(C)
    #[arg(long = "C", global = true, default_value_t = 1.0)]
    big_c: f64,
    /// Seed for the verification samplers
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Iteration budget for classification
    #[arg(long, global = true, default_value_t = 200)]
    budget: usize,
    /// Output file [default: standard output; required for render]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the orbit of (z0, w0) as CSV
    Orbit {
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        z0: Complex64,
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        w0: Complex64,
        /// Number of steps
        n: usize,
    },
    /// Classify (z0, w0) into one of the four escaping components
    Classify {
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        z0: Complex64,
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        w0: Complex64,
    },
    /// Run property suites and print a tab-separated report
    Verify {
        /// Suite name, or `all`
        #[arg(long, default_value = "all")]
        suite: String,
        /// Admissible samples per suite [default: per-suite acceptance scale]
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Render a real 2-slice to a binary PPM file
    Render {
        #[arg(long, value_enum, default_value_t = Slice::Real)]
        slice: Slice,
        /// Slice center X,Y
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair, default_value = "0,0")]
        center: (f64, f64),
        /// Slice extent X,Y
        #[arg(long, value_parser = parse_pair, default_value = "60,60")]
        extent: (f64, f64),
        /// Resolution WxH
        #[arg(long, value_parser = parse_resolution, default_value = "400x400")]
        res: (u32, u32),
        /// Fixed w for the zplane slice
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
        fixed: Complex64,
        /// Captured colors are scaled by gamma^capture_step, gamma in (0, 1]
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Slice {
    /// Im z = Im w = 0, axes Re z and Re w
    Real,
    /// w fixed, axes Re z and Im z
    Zplane,
}

fn parse_delta(text: &str) -> Result<f64, String> {
    let d: f64 = text
        .parse()
        .map_err(|_| format!("invalid number `{text}`"))?;
    if d.is_finite() && d > 2.0 {
        Ok(d)
    } else {
        Err(format!("delta must be a finite number > 2, got {text}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("henon-lab: {e}");
            e.exit_code()
        }
    }
}
