use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rt_core::fd::DEFAULT_STEP;
use rt_core::sampler::GridSpec;

#[derive(Debug, Parser)]
#[command(name = "rt", version, about = "Generate and check RT-surfaces from holomorphic data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the surface of (f, g) and write an OBJ mesh and optional CSV report.
    Generate(GenerateArgs),
    /// Check the RT identity, the finite-difference oracle and the dual immersion over a grid.
    Verify(VerifyArgs),
    /// Sample the rotation surface X_{a,b} and check it against the route through f = a z + b, g = e^z.
    Rotation(RotationArgs),
    /// Locate singular parallels of X_{a,b} and compare them with the printed table.
    Singular(SingularArgs),
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Holomorphic f(z)
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Holomorphic g(z)
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// u1 axis as lo:hi:count
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub u1: Axis,
    /// u2 axis as lo:hi:count (radians for rotation surfaces)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub u2: Axis,
}

impl GridArgs {
    pub fn spec(&self) -> GridSpec {
        grid_spec(self.u1, self.u2)
    }
}

pub fn grid_spec(u1: Axis, u2: Axis) -> GridSpec {
    GridSpec { u1_min: u1.lo, u1_max: u1.hi, u2_min: u2.lo, u2_max: u2.hi, n1: u1.count, n2: u2.count }
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Minimum admissible |g'|
    #[arg(long, default_value_t = 1e-12, value_parser = parse_positive)]
    pub eps_g: f64,
    /// Minimum admissible |det V| / h^2
    #[arg(long, default_value_t = 1e-12, value_parser = parse_positive)]
    pub eps_det: f64,
    /// Nodes whose normalized regularity falls below this are masked
    #[arg(long, default_value_t = 1e-9, value_parser = parse_nonnegative)]
    pub min_regularity: f64,
    /// Tolerance of the closed-form vs direct det V check
    #[arg(long, default_value_t = 1e-10, value_parser = parse_positive)]
    pub tol_det: f64,
    /// Tolerance of the closed-form vs gradient immersion check
    #[arg(long, default_value_t = 1e-10, value_parser = parse_positive)]
    pub tol_dual: f64,
    /// Tolerance of the explicit vs V-product fundamental form check
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    pub tol_forms: f64,
    /// Tolerance of the regularity identity check
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    pub tol_regularity: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// OBJ output path
    #[arg(long)]
    pub out: PathBuf,
    /// CSV report path
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Finite-difference step of the oracle
    #[arg(long, default_value_t = DEFAULT_STEP, value_parser = parse_positive)]
    pub step: f64,
    /// Bound on |2 Psi H + (Lambda + Psi^2) K| / (|2 Psi H| + |(Lambda + Psi^2) K|)
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    pub tol_residual: f64,
    /// Bound on the relative closed-form vs oracle deviation
    #[arg(long, default_value_t = 1e-5, value_parser = parse_positive)]
    pub tol_oracle: f64,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct RotationArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_finite)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0, value_parser = parse_finite)]
    pub b: f64,
    /// u1 axis as lo:hi:count
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub u1: Axis,
    /// u2 axis as lo:hi:count in radians [default: 64 nodes over [0, 2 pi)]
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub u2: Option<Axis>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct SingularArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_finite)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0, value_parser = parse_finite)]
    pub b: f64,
    /// u1 search interval as lo:hi
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: (f64, f64),
}

pub fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

fn parse_nonnegative(s: &str) -> Result<f64, String> {
    let v = parse_finite(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must not be negative"))
    }
}

pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi] = parts[..] else {
        return Err(format!("expected lo:hi, got `{s}`"));
    };
    let (lo, hi) = (parse_finite(lo)?, parse_finite(hi)?);
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(format!("need lo < hi in `{s}`"))
    }
}

pub fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(format!("expected lo:hi:count, got `{s}`"));
    };
    let (lo, hi) = parse_range(&format!("{lo}:{hi}"))?;
    let count: usize = count.trim().parse().map_err(|_| format!("`{count}` is not a node count"))?;
    if count < 2 {
        return Err(format!("need at least 2 nodes, got {count}"));
    }
    Ok(Axis { lo, hi, count })
}
