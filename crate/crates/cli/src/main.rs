mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Spherical codes, spoiling operations, bound curves and sphere packings.
#[derive(Parser, Debug)]
#[command(name = "sphcodes", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a bound curve at given angles (CSV).
    Bounds(BoundsArgs),
    /// Sample the figure curve families (CSV or SVG).
    Figures(FiguresArgs),
    /// Embed a binary code into the unit sphere.
    Embed(EmbedArgs),
    /// Apply a spoiling operation or pipeline to a code file.
    Spoil(SpoilArgs),
    /// Build the empirical atlas of code points.
    Atlas(AtlasArgs),
    /// Theta-series coefficients of a lattice or periodic packing (CSV).
    Theta(ThetaArgs),
    /// Kissing configuration of a packing.
    Kissing(KissingArgs),
    /// Shell code of a packing around a point.
    Shell(ShellArgs),
    /// Code densities, packing densities and packing-density bounds.
    Density(DensityArgs),
    /// Run the built-in property suites.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CurveName {
    Kl,
    Rankin,
    RankinSpoiled,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    curve: CurveName,
    /// Angle(s) in radians; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    phi: Vec<f64>,
    /// Cosine(s) of the angle; repeatable.
    #[arg(long = "cos", allow_hyphen_values = true)]
    cos_phi: Vec<f64>,
    /// Dimension for the Rankin curves.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Number of first spoilings for `rankin-spoiled`.
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AxisArg {
    Cos,
    Phi,
}

#[derive(Args, Debug)]
struct FiguresArgs {
    #[arg(long, value_enum)]
    which: Which,
    /// Dimensions: `a..b`, `a,b,c` or a single value (fig1 default 1..10,
    /// fig3 default 2).
    #[arg(long)]
    n: Option<String>,
    /// Spoiling counts for fig3 (default 1..5).
    #[arg(long)]
    m: Option<String>,
    #[arg(long, default_value_t = sphcodes::bounds::DEFAULT_SAMPLES)]
    samples: usize,
    /// Lower end of the fig2 angle range.
    #[arg(long, default_value_t = sphcodes::bounds::FIG2_PHI_MIN)]
    phi_min: f64,
    /// Output format; inferred from the `--out` extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Horizontal axis of SVG plots.
    #[arg(long, value_enum, default_value = "cos")]
    axis: AxisArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    /// Binary code file (one word per line).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SpoilOp {
    /// First spoiling with `--lambda`.
    Lift,
    /// Second spoiling along `--line` (or the best line found).
    Project,
    /// Third spoiling on a balanced line.
    Halve,
    /// Reduce template `[n-1, k-a, cos φ]`.
    Reduce,
    /// Down step towards the cutoff apex.
    Down,
    /// Up step `λ = n/(n+1)`.
    Up,
    /// Binary: insert a constant bit at `--pos`.
    Insert,
    /// Binary: delete coordinate `--pos`.
    Delete,
    /// Binary: keep words with `--bit` (or the majority) at `--pos`.
    Restrict,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SignArg {
    Opposite,
    Same,
}

#[derive(Args, Debug)]
struct SpoilArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    op: SpoilOp,
    /// Treat the input as a binary code file.
    #[arg(long)]
    binary: bool,
    /// Renormalize input points instead of rejecting non-unit rows.
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    lambda: Option<f64>,
    /// Direction of the projection line, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    line: Option<String>,
    #[arg(long, value_enum, default_value = "opposite")]
    sign: SignArg,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long, default_value_t = sphcodes::atlas::DEFAULT_PHI_C)]
    phi_c: f64,
    /// 1-based coordinate for binary operations.
    #[arg(long)]
    pos: Option<usize>,
    #[arg(long)]
    bit: Option<u8>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AtlasArgs {
    #[arg(long, default_value_t = sphcodes::atlas::DEFAULT_PHI_C)]
    phi_c: f64,
    /// Number of spoiling attempts.
    #[arg(long, env = "SPHCODES_BUDGET", default_value_t = sphcodes::atlas::DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multiplicity report around `R,cos_phi`.
    #[arg(long, allow_hyphen_values = true)]
    report: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Snapshot file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct PackingSource {
    /// Lattice file (`dim`, basis rows, optional `translates`, `radius`).
    #[arg(long, conflicts_with = "named")]
    lattice: Option<PathBuf>,
    /// Built-in lattice: Z<n>, A2, D<n>, E8.
    #[arg(long)]
    named: Option<String>,
}

#[derive(Args, Debug)]
struct ThetaArgs {
    #[command(flatten)]
    source: PackingSource,
    #[arg(long)]
    m_max: f64,
    /// Cap on enumeration nodes.
    #[arg(long, default_value_t = sphcodes::lattice::DEFAULT_BUDGET)]
    enum_budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct KissingArgs {
    #[command(flatten)]
    source: PackingSource,
    /// Index of the translate whose sphere is the center.
    #[arg(long, default_value_t = 0)]
    center: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ShellArgs {
    #[command(flatten)]
    source: PackingSource,
    /// Shell radius.
    #[arg(long)]
    u: f64,
    /// Base point, comma separated (origin when omitted).
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DensityArgs {
    /// Spherical code file: report its density.
    #[arg(long, conflicts_with_all = ["lattice", "named", "n"])]
    code: Option<PathBuf>,
    #[arg(long)]
    normalize: bool,
    #[command(flatten)]
    source: PackingSource,
    /// Dimension for cap areas and packing-density bounds.
    #[arg(long, requires = "phi")]
    n: Option<usize>,
    #[arg(long)]
    phi: Option<f64>,
    /// Value of M(n, φ) (estimated when omitted).
    #[arg(long)]
    m: Option<f64>,
    /// Value of M(n+1, φ) (estimated when omitted).
    #[arg(long)]
    m_next: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// geometry, binary, spoiling, bounds, packings or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<commands::UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
