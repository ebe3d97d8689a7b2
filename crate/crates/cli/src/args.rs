use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Medium-scale curvature experiments on Cayley graphs of finitely generated groups.
#[derive(Debug, Parser, Serialize)]
#[command(name = "curv", version)]
pub struct Cli {
    /// Group: shorthand (free:2, zn:2, heis3, dinf, z2xdinf, s3xz, s3, sl2z) or a JSON/TOML config file
    #[arg(long, global = true)]
    pub group: Option<String>,

    /// JSON list of element literals replacing the generating set
    #[arg(long, global = true)]
    pub genset: Option<PathBuf>,

    /// JSON file with a quotient table and generator images; filters to the kernel
    #[arg(long, global = true)]
    pub kernel: Option<PathBuf>,

    /// Output directory; without it the JSON report goes to stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output formats written to --out
    #[arg(long, global = true, value_delimiter = ',', default_value = "csv,json")]
    pub format: Vec<Format>,

    /// Element budget for searches (closure: maximum size of the closed set)
    #[arg(long, global = true)]
    pub budget: Option<usize>,

    /// Wall-clock cap in seconds; exceeding it aborts with the resource exit code
    #[arg(long, global = true)]
    pub max_seconds: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Enumerate the ball B(R) and export it
    Ball {
        #[arg(long)]
        radius: u32,
    },
    /// Curvature κ and κ̄ of one element
    Kappa {
        #[arg(long)]
        element: String,
        /// Table radius; defaults to |x| + 2
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, default_value_t = 40)]
        limit: u32,
    },
    /// Sign counts of κ on every sphere up to R
    Census {
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 10)]
        witnesses: usize,
    },
    /// Annulus cancellation identity on A(r1, r2)
    Annulus {
        #[arg(long)]
        r1: u32,
        #[arg(long)]
        r2: u32,
    },
    /// Conjugacy orbit of an element inside B(M)
    Orbit {
        #[arg(long)]
        element: String,
        #[arg(long)]
        bound: u32,
    },
    /// Exit and k-step exit counts per sphere
    Exits {
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Greedy descent to a shorter conjugate
    Reduce {
        #[arg(long)]
        element: String,
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, default_value_t = 40)]
        limit: u32,
    },
    /// Boundary sizes of the conjugacy graph spanned by u, v
    BoundaryProfile {
        #[arg(long)]
        element: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<u32>,
        #[arg(long, default_value_t = 40)]
        limit: u32,
    },
    /// Stable-norm estimate from sampled powers
    StableNorm {
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 64)]
        nmax: u32,
        #[arg(long, default_value_t = 40)]
        limit: u32,
    },
    /// Ball sizes and the growth inequality chain
    Growth {
        #[arg(long)]
        radius: u32,
    },
    /// Negative-curvature hypothesis and growth chain check
    VerifyGrowth {
        #[arg(long, default_value_t = 0)]
        rkappa: u32,
        #[arg(long)]
        radius: u32,
    },
    /// Conjugation closure of the generating set
    Closure {
        /// Write the closed set as a JSON list of literals
        #[arg(long)]
        emit_genset: Option<PathBuf>,
    },
    /// Check κ = 0 for cutoff < |x| ≤ R
    FlatCheck {
        #[arg(long, default_value_t = 3)]
        cutoff: u32,
        #[arg(long, default_value_t = 10)]
        radius: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ball { .. } => "ball",
            Command::Kappa { .. } => "kappa",
            Command::Census { .. } => "census",
            Command::Annulus { .. } => "annulus",
            Command::Orbit { .. } => "orbit",
            Command::Exits { .. } => "exits",
            Command::Reduce { .. } => "reduce",
            Command::BoundaryProfile { .. } => "boundary-profile",
            Command::StableNorm { .. } => "stable-norm",
            Command::Growth { .. } => "growth",
            Command::VerifyGrowth { .. } => "verify-growth",
            Command::Closure { .. } => "closure",
            Command::FlatCheck { .. } => "flat-check",
        }
    }

    pub fn uses_kernel(&self) -> bool {
        matches!(
            self,
            Command::Ball { .. }
                | Command::Census { .. }
                | Command::Annulus { .. }
                | Command::Growth { .. }
                | Command::VerifyGrowth { .. }
        )
    }
}
