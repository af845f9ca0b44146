use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::grid::{ComplexGrid, IntGrid, RealGrid};

#[derive(Debug, Parser)]
#[command(name = "barnesg", version, about = "Barnes G-function evaluation and verification tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file. Without it the table goes to `$BARNESG_OUTPUT_DIR/<command>.<ext>`
    /// when that variable is set, otherwise to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for every random stream of the run; always recorded.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// log G(1+z) by product, series and integral routes.
    #[command(subcommand)]
    Barnes(BarnesCmd),
    /// Moments of |det(I - U)| for Haar unitary U.
    #[command(subcommand)]
    Cue(CueCmd),
    /// Exact and Monte Carlo checks of the distributional identities.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Thorin-measure limit functional and its auxiliary integrals.
    #[command(subcommand)]
    Ggc(GgcCmd),
    /// Euler-product factors.
    #[command(subcommand)]
    Factor(FactorCmd),
}

#[derive(Debug, Subcommand)]
pub enum BarnesCmd {
    /// Every applicable route at each z, with pairwise agreement.
    Eval(BarnesEval),
    /// Dispatcher values over a grid.
    Table(BarnesTable),
}

#[derive(Debug, Args, Serialize)]
pub struct BarnesEval {
    /// Complex grid, e.g. `0,0.5,0.3+0.4i`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: ComplexGrid,
    /// Terms of the truncated product.
    #[arg(long, default_value_t = barnesg::barnes::DEFAULT_PRODUCT_TERMS)]
    pub terms: u64,
    /// Absolute slack added to the route error estimates.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct BarnesTable {
    #[arg(long, allow_hyphen_values = true)]
    pub z: ComplexGrid,
}

#[derive(Debug, Subcommand)]
pub enum CueCmd {
    /// log E|Z_N|^{2λ} over (N, λ) grids.
    Moments(CueMoments),
    /// Convergence study of a normalised moment towards its limit.
    Limit(CueLimit),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    None,
    NToLambdaSq,
    NToHalfLambdaSq,
}

#[derive(Debug, Args, Serialize)]
pub struct CueMoments {
    #[arg(long)]
    pub n: IntGrid,
    /// Complex exponents λ.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: ComplexGrid,
    #[arg(long, value_enum, default_value_t = Scaling::None)]
    pub scaling: Scaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    /// E|Z_N|^{2λ} / (N^{λ²} M(λ))
    Moment,
    /// gamma-product Mellin transform times A^λ G(1+λ)
    GammaProduct,
}

#[derive(Debug, Args, Serialize)]
pub struct CueLimit {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: RealGrid,
    #[arg(long, default_value = "100,1000,10000")]
    pub n: IntGrid,
    #[arg(long, value_enum, default_value_t = LimitKind::Moment)]
    pub kind: LimitKind,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Mellin residual of the gamma-product identity.
    KsIdentity(IdentityGrid),
    /// Mellin residual of the beta-product identity.
    BetaIdentity(IdentityGrid),
    /// Haar-unitary Monte Carlo against the exact moments and beta products.
    Haar(VerifyHaar),
    /// Normalisation, Mellin moments and KS test of the Q sampler.
    Q(VerifyQ),
}

#[derive(Debug, Args, Serialize)]
pub struct IdentityGrid {
    #[arg(long, default_value = "1:50:50")]
    pub n: IntGrid,
    #[arg(long, allow_hyphen_values = true, default_value = "0.1,0.5,1,2,3.7")]
    pub t: RealGrid,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyHaar {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    /// Significance level of the KS test.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Moment checks pass within this many standard errors.
    #[arg(long, default_value_t = 3.0)]
    pub sigmas: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyQ {
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, allow_hyphen_values = true, default_value = "-0.5,0.5,1,2")]
    pub s: RealGrid,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 3.0)]
    pub sigmas: f64,
}

#[derive(Debug, Subcommand)]
pub enum GgcCmd {
    /// H(λ) under both constants.
    H(GgcH),
    /// Exact scaled Laplace transform of S_N against H(λ).
    Limit(GgcLimit),
    /// R_N(ξ, λ) over increasing N.
    RnProbe(GgcRn),
    /// The double-sum integral against its closed form.
    DoubleSum(GgcDoubleSum),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeChoice {
    OnePlusGamma,
    Gamma,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct GgcH {
    /// Atoms as `mass:location` pairs, e.g. `1:1,2:2`.
    #[arg(long, default_value = "1:1")]
    pub measure: String,
    #[arg(long)]
    pub lambda: RealGrid,
    #[arg(long, value_enum, default_value_t = ModeChoice::Both)]
    pub mode: ModeChoice,
}

#[derive(Debug, Args, Serialize)]
pub struct GgcLimit {
    #[arg(long, default_value = "1:1")]
    pub measure: String,
    #[arg(long, default_value = "0.5,1,2")]
    pub lambda: RealGrid,
    #[arg(long, default_value = "100,1000,10000")]
    pub n: IntGrid,
}

#[derive(Debug, Args, Serialize)]
pub struct GgcRn {
    #[arg(long, default_value_t = 1.0)]
    pub xi: f64,
    #[arg(long, default_value = "0.5,1,2")]
    pub lambda: RealGrid,
    #[arg(long, default_value = "100,1000,10000")]
    pub n: IntGrid,
}

#[derive(Debug, Args, Serialize)]
pub struct GgcDoubleSum {
    #[arg(long, default_value = "1,10,100,1000,10000")]
    pub n: IntGrid,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

#[derive(Debug, Subcommand)]
pub enum FactorCmd {
    /// Truncated arithmetic Euler product.
    Arithmetic(FactorArithmetic),
}

#[derive(Debug, Args, Serialize)]
pub struct FactorArithmetic {
    #[arg(long)]
    pub lambda: RealGrid,
    #[arg(long = "p-max", default_value = "100000,200000")]
    pub p_max: IntGrid,
}
