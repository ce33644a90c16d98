use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact verification toolkit for the Jacobian ideal of d-linear maps.
///
/// Compositions are comma separated (`2,0`), level labelings separate rows
/// with `;` and entries with `,` (`1;1,2`), polynomials use the canonical
/// text grammar (`-1 * a[1,1]^2 + a[1,2]*a[2,1]`).
#[derive(Debug, Parser)]
#[command(name = "jacverify", version)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "JACVERIFY_WORKERS")]
    pub workers: Option<usize>,

    /// Print wall time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Dims {
    #[arg(long)]
    pub d: u32,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the generators J_(k,alpha) of the Jacobian ideal.
    Gens {
        #[command(flatten)]
        dims: Dims,
    },
    /// Compare generators from the determinant with the closed formula.
    CrossCheck {
        #[command(flatten)]
        dims: Dims,
    },
    /// Weight polynomial of a fern labeling.
    Z {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        u0: usize,
        #[arg(long)]
        uk: usize,
        /// Level labeling, e.g. `1;2`.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        nu: String,
        /// Level count, needed only when every row is empty (d = 1).
        #[arg(long)]
        k: Option<usize>,
    },
    /// First generalized Cayley-Hamilton identity.
    Identity1 {
        #[command(flatten)]
        dims: Dims,
        #[command(flatten)]
        inst: InstanceArgs,
    },
    /// Second generalized Cayley-Hamilton identity.
    Identity2 {
        #[command(flatten)]
        dims: Dims,
        #[command(flatten)]
        inst: InstanceArgs,
        /// Fixed first-row labels, e.g. `1`.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Two-variable relation between fern weights and generators, for both v.
    Relation {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        alpha1: Option<String>,
        #[arg(long)]
        alpha2: Option<String>,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Check the sign-reversing involution on the tuple states.
    Involution {
        #[command(flatten)]
        dims: Dims,
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
        variant: u8,
        #[arg(long)]
        beta: Option<String>,
        /// Write every (state, partner) pair as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Truncated formal inverse of the d-linear map.
    Inverse {
        #[command(flatten)]
        dims: Dims,
        #[arg(long = "Nmax")]
        nmax: u32,
        /// One coefficient `i,alpha,N`, e.g. `1,1,1,2`.
        #[arg(long)]
        coeff: Option<String>,
    },
    /// Decide membership of a homogeneous a-polynomial in the Jacobian ideal.
    Member {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Row-reduced spanning set of one degree slice of the Jacobian ideal.
    Echelon {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        degree: u32,
    },
    /// Certify every fern weight for n = 2 as an ideal member.
    FernLemmas {
        #[arg(long)]
        d: u32,
    },
    /// Certify the inverse coefficients of degree N for n = 2.
    VerifyTheorem {
        #[arg(long)]
        d: u32,
        #[arg(long = "N", value_delimiter = ',', required = true)]
        big_n: Vec<u32>,
    },
    /// Cayley-Hamilton on random rational matrices.
    CayleyHamilton {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Composition, e.g. `2,0`.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub u0: Option<usize>,
    #[arg(long)]
    pub un: Option<usize>,
    /// Sweep every admissible instance.
    #[arg(long)]
    pub all: bool,
}
