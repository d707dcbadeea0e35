use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const GRAMMAR: &str = "\
Functions:  name[:key=value,...]   e.g. log_abs, log_abs:z0=1+2i, lelong_max:dim=2,
            quadratic:c=1, quadratic:diag=1;4, m_log:m=2,coord=1,dim=1, max_log:w=1;1,
            log_poly:roots=0;1+i,mult=2;1, radial_poly:c=1;0.5, constant:value=3,dim=2,
            counterexample
Regions:    disc:c=0,r=1   polydisc:c=0;0,r=0.5;0.25   segment:a=-0.27846,b=1
            box:r=0.01,a=1;2   polytope:v=0|1|i
Complex:    1, -2.5, i, 1+2i, 1e-3-2i      lists use ';', vertices use '|'
Quadrature: --quad radial=12,angular=16,tol=1e-10,refine=6,mc=200000,seed=0

Exit codes: 0 all checks passed, 1 a mathematical check failed,
            2 numerical failure, 64 malformed input";

#[derive(Debug, Parser)]
#[command(name = "pshosc", version, about = "Oscillation of plurisubharmonic functions and weighted Bergman kernels", after_help = GRAMMAR)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Report format.
    #[arg(long, value_enum, global = true)]
    pub output: Option<OutputFormat>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,

    /// Write the CSV table here instead of stdout.
    #[arg(long, global = true)]
    pub csv_out: Option<PathBuf>,

    /// Quadrature overrides, e.g. `tol=1e-8,radial=16`.
    #[arg(long, global = true)]
    pub quad: Option<String>,

    /// JSON experiment config; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed for every seeded sweep.
    #[arg(long, env = "PSHOSC_SEED", global = true)]
    pub seed: Option<u64>,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print wall times to stderr.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Oscillation analytics.
    #[command(subcommand)]
    Osc(OscCmd),
    /// The segment constant γ.
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// Remez-type bound for log|p|.
    #[command(subcommand)]
    Remez(RemezCmd),
    /// Weighted Bergman kernels at the origin.
    #[command(subcommand)]
    Bergman(BergmanCmd),
    /// Empirical John–Nirenberg machinery.
    #[command(subcommand)]
    Jn(JnCmd),
    /// Run the acceptance suite C01–C13.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Args, Clone)]
pub struct FnArg {
    /// Catalog function.
    #[arg(long = "fn")]
    pub function: Option<String>,
}

#[derive(Debug, Args, Clone)]
pub struct RegionArg {
    /// Region.
    #[arg(long)]
    pub region: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum OscCmd {
    /// sup, mean, UO and MO over a region.
    Uo {
        #[command(flatten)]
        f: FnArg,
        #[command(flatten)]
        region: RegionArg,
    },
    /// I₁, I₂, J₁, J₂ over a polydisc.
    Harnack {
        #[command(flatten)]
        f: FnArg,
        #[command(flatten)]
        region: RegionArg,
    },
    /// UO < 3ⁿ over a seeded family of polydiscs.
    LelongClass {
        #[command(flatten)]
        f: FnArg,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Blow-up table of the two-variable counterexample.
    Counterexample {
        /// x-values, `;`-separated, each ≤ −1.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Directional Lelong number as a slope against log r.
    LelongNumber {
        #[command(flatten)]
        f: FnArg,
        /// Exponents a, `;`-separated.
        #[arg(long)]
        a: String,
        /// Largest r.
        #[arg(long, default_value_t = 0.5)]
        r_max: f64,
        /// Smallest r.
        #[arg(long, default_value_t = 1e-3)]
        r_min: f64,
        #[arg(long, default_value_t = 6)]
        r_count: usize,
    },
    /// UO of log|z| over unit discs centred at x = |ẑ|/b on a grid in (0, 1).
    DiscSweep {
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GammaCmd {
    /// Root of γ + log(γ − 1) = 0.
    Solve {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum RemezCmd {
    /// Seeded random (polynomial, region) pairs.
    Sweep {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        deg_max: u32,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// z^k on [a₀ + δ, 1].
    Sharpness {
        /// δ values, `;`-separated.
        #[arg(long, default_value = "0.1;0.01;0.001;0.0001")]
        deltas: String,
        /// Degrees, `;`-separated.
        #[arg(long, default_value = "1;2;3")]
        degrees: String,
    },
    /// One polynomial on one region.
    Check {
        /// A `log_poly:...` catalog entry.
        #[command(flatten)]
        f: FnArg,
        #[command(flatten)]
        region: RegionArg,
    },
}

#[derive(Debug, Args, Clone)]
pub struct WeightArgs {
    #[command(flatten)]
    pub f: FnArg,
    /// ε in the weight εφ.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Expected dimension; checked against the function.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Circular,
    Gram,
}

#[derive(Debug, Subcommand)]
pub enum BergmanCmd {
    /// K_{εφ,P}(0).
    Kernel {
        #[command(flatten)]
        w: WeightArgs,
        /// Centred polydisc (default: unit polydisc).
        #[command(flatten)]
        region: RegionArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// K_{εφ,𝔻ⁿ}(0) ≥ e^{εφ(0)}/πⁿ.
    Ot {
        #[command(flatten)]
        w: WeightArgs,
    },
    /// Two-sided bound on K·|P|·e^{−sup εφ}.
    Sandwich {
        #[command(flatten)]
        w: WeightArgs,
        #[command(flatten)]
        region: RegionArg,
    },
    /// Finite-difference Hessian of F at 0 and its Richardson limit.
    Hessian {
        #[command(flatten)]
        w: WeightArgs,
        /// Steps h, `;`-separated.
        #[arg(long, default_value = "0.2;0.1;0.05")]
        h: String,
    },
    /// Directional Lelong numbers of φ and of log K_{εφ}.
    LelongPreserve {
        #[command(flatten)]
        f: FnArg,
        #[arg(long)]
        a: String,
        /// ε candidates, `;`-separated, tried from the largest.
        #[arg(long, default_value = "1.5;0.9;0.4")]
        eps_values: String,
        #[arg(long, default_value_t = 0.5)]
        r_max: f64,
        #[arg(long, default_value_t = 1e-3)]
        r_min: f64,
        #[arg(long, default_value_t = 6)]
        r_count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum JnCmd {
    /// Distribution function of |φ − φ_B| and its exponential tail.
    Decay {
        #[command(flatten)]
        f: FnArg,
        /// An anisotropic box (default: unit polydisc).
        #[command(flatten)]
        region: RegionArg,
        /// t-grid, `;`-separated (default 0.5, 0.6, …, 3.0).
        #[arg(long)]
        t_grid: Option<String>,
    },
    /// Exponential means over the shrinking family P_{2^{−k a}}(ẑ).
    Eps0 {
        #[command(flatten)]
        f: FnArg,
        #[arg(long)]
        a: String,
        /// Centre ẑ, `;`-separated (default 0).
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value = "0.5;1;1.5;2.5")]
        eps: String,
        #[arg(long, default_value_t = pshosc::jn::DEFAULT_THRESHOLD)]
        threshold: f64,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Only these criteria, `,`-separated (e.g. C01,C12).
    #[arg(long)]
    pub only: Option<String>,
}
