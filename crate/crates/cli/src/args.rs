use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "linecones", version, about = "Cones of lines with high contact on hypersurfaces over F_q")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Prime modulus q; must exceed the degree.
    #[arg(long, global = true, env = "LINECONES_MODULUS")]
    pub modulus: Option<u64>,
    /// Evaluate formulas outside their hypotheses; results are flagged.
    #[arg(long, global = true)]
    pub permissive: bool,
    /// Reduction step budget for each Gröbner basis.
    #[arg(long, global = true)]
    pub gb_step_cap: Option<u64>,
    /// TOML file with default values for campaign parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `F` in `n + 2` variables `x0, ..., x{n+1}`.
#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    #[arg(long)]
    pub poly: String,
    /// Dimension of the hypersurface.
    #[arg(long)]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generators G_1, ..., G_{h-1} of the cone V^h_p and its dimension.
    Cone {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        point: String,
        #[arg(long)]
        h: u32,
    },
    /// Checks dim V^h_p = n + 2 - h over a range of h.
    Dim {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        point: String,
        /// Single value or inclusive range `lo..hi`.
        #[arg(long)]
        h: String,
    },
    /// Contact order of a line, and the multiplicity of X ∩ T_pX at p.
    Contact {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        point: String,
        #[arg(long)]
        direction: Option<String>,
    },
    /// Polar hypersurface Pol^s_q(F) and the locus Δ_{q,h}.
    Polar {
        #[command(flatten)]
        poly: PolyArgs,
        /// The pole q.
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long)]
        h: Option<u32>,
        /// Point p of X to test for membership in Δ_{q,h}.
        #[arg(long, requires = "h")]
        at: Option<String>,
    },
    /// Searches for p with q, q' ∈ V^h_p.
    Connect {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        point: String,
        #[arg(long)]
        point2: String,
        #[arg(long)]
        h: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bounds on irr_k, covering and connecting gonality.
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        /// Also report parameter-space dimensions for this h.
        #[arg(long)]
        h: Option<u32>,
    },
    /// Connecting gonality as a function of d.
    Table {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 16)]
        n_max: u32,
    },
    /// Randomized campaigns.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Degree of the projection from p of X ∩ V^h_p.
    Project {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        point: String,
        #[arg(long)]
        h: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct CampaignArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Single value or inclusive range `lo..hi`.
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub trials: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub retry_budget: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum VerifyKind {
    Dimension(CampaignArgs),
    Multiplicity(CampaignArgs),
    Connecting(CampaignArgs),
    Projection(CampaignArgs),
}
