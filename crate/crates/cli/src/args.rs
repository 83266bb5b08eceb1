use std::path::PathBuf;

use clap::{Parser, Subcommand};
use matbeta::integrate::Engine;

/// Closed forms and numerical checks for matrix beta integrals.
#[derive(Debug, Clone, Parser)]
#[command(name = "matbeta", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for Monte Carlo engines.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    pub samples: Option<u64>,

    /// Relative tolerance for deterministic engines.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// auto, quadrature, mc or enumeration.
    #[arg(long, global = true)]
    pub engine: Option<Engine>,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// key=value file merged under the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List registered identities.
    List,

    /// Check one identity at one parameter point.
    #[command(after_help = "Parameters follow the id as --name value, e.g. `verify euler --alpha 2 --beta 3`.")]
    Verify {
        id: String,
        /// Identity parameters as --name value pairs.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "PARAMS")]
        rest: Vec<String>,
    },

    /// Tabulate one identity over a parameter grid as CSV.
    #[command(after_help = "Grids are name=v1;v2;... (commas also separate values of scalar parameters).")]
    Tabulate {
        id: String,
        /// Grid axis, repeatable.
        #[arg(long = "grid", value_name = "NAME=VALUES")]
        grid: Vec<String>,
        /// Also estimate the left-hand side for every row.
        #[arg(long)]
        lhs: bool,
        /// Output path; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Fixed parameters as --name value pairs.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "PARAMS")]
        rest: Vec<String>,
    },

    /// Monte Carlo diagnostics: z-scores over a sweep of seeds.
    Sample {
        id: String,
        /// Number of consecutive seeds, starting at --seed.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        /// Identity parameters as --name value pairs.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "PARAMS")]
        rest: Vec<String>,
    },
}
