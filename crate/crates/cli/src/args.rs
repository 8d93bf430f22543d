use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use propfrac::verify::{Suite, Tolerances};
use propfrac::{KernelFunction, OpKind, QuadConfig};

#[derive(Debug, Parser)]
#[command(
    name = "propfrac",
    version,
    about = "Generalized proportional fractional integrals and derivatives"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one operator on a grid and write CSV.
    Eval(EvalArgs),
    /// Run the built-in verification suites.
    Verify(VerifyArgs),
    /// Evaluate every spec line of a file, one CSV per spec.
    Table(TableArgs),
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Initial number of quadrature nodes.
    #[arg(long, default_value_t = 32)]
    pub quad_base_nodes: usize,
    /// Largest number of quadrature nodes before giving up.
    #[arg(long, default_value_t = 512)]
    pub quad_max_nodes: usize,
    /// Relative tolerance between successive node doublings.
    #[arg(long, env = "PROPFRAC_REL_TOL", default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Absolute tolerance between successive node doublings.
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
}

impl QuadArgs {
    pub fn config(&self) -> QuadConfig {
        QuadConfig {
            base_nodes: self.quad_base_nodes,
            max_nodes: self.quad_max_nodes,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Operator.
    #[arg(long, value_parser = clap::value_parser!(OpKind))]
    pub op: OpKind,
    /// Order α (not used by prop-deriv and prop-int).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Proportion ρ.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: f64,
    /// identity | log | power:MU | shifted-power:MU:A | expr:<g(x)>
    #[arg(long, default_value = "identity")]
    pub kernel: KernelFunction,
    /// Left anchor, for left operators and prop-int.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Right anchor, for right operators.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// The function f(x).
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// start:end:points, both ends included.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Write CSV here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = clap::value_parser!(Suite))]
    pub suite: Suite,
    /// Print only failing cases.
    #[arg(long)]
    pub failures_only: bool,
    #[arg(long)]
    pub tol_integral: Option<f64>,
    #[arg(long)]
    pub tol_rl: Option<f64>,
    #[arg(long)]
    pub tol_caputo: Option<f64>,
    #[arg(long)]
    pub tol_annihilation: Option<f64>,
    #[arg(long)]
    pub tol_semigroup: Option<f64>,
    #[arg(long)]
    pub tol_inverse: Option<f64>,
    #[arg(long)]
    pub tol_reduction: Option<f64>,
    #[arg(long)]
    pub tol_reduction_self: Option<f64>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

impl VerifyArgs {
    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            integral: self.tol_integral.unwrap_or(d.integral),
            rl: self.tol_rl.unwrap_or(d.rl),
            caputo: self.tol_caputo.unwrap_or(d.caputo),
            annihilation: self.tol_annihilation.unwrap_or(d.annihilation),
            semigroup: self.tol_semigroup.unwrap_or(d.semigroup),
            inverse: self.tol_inverse.unwrap_or(d.inverse),
            reduction: self.tol_reduction.unwrap_or(d.reduction),
            reduction_self: self.tol_reduction_self.unwrap_or(d.reduction_self),
        }
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// File with one `key=value ...` spec per line.
    pub file: PathBuf,
    /// Directory for the generated CSV files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub quad: QuadArgs,
}
