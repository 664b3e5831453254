use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lotkaian_core::loglog::RegressionMode;
use lotkaian_core::report::TableFormat;
use lotkaian_core::XminPolicy;

pub const OUT_ENV: &str = "LOTKAIAN_OUT";
pub const DEFAULT_OUT: &str = "lotkaian-out";

#[derive(Debug, Parser)]
#[command(name = "lotkaian", version, about = "Citation-distribution analysis of author bibliographies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full analysis on one or more citation exports.
    Analyze(AnalyzeArgs),
    /// Fit a discrete power law to a list of citation counts.
    Fit(FitArgs),
    /// Draw from one of the reference generators.
    Simulate(SimulateArgs),
    /// Print the 25-bin histogram of a citation export.
    Bins(BinsArgs),
    /// Rebuild figures and comparative tables from saved reports.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Raw,
    Normalized,
}

impl From<ModeArg> for RegressionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Raw => RegressionMode::RawCounts,
            ModeArg::Normalized => RegressionMode::WidthNormalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => TableFormat::Json,
            FormatArg::Csv => TableFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Linear,
    Log1p,
}

#[derive(Debug, Args)]
pub struct FitOptions {
    /// x_min policy: `h` (h-index), `scan`, or an explicit value.
    #[arg(long, default_value = "h", value_parser = parse_xmin)]
    pub xmin: XminPolicy,
    /// Bootstrap replicas for the goodness-of-fit p-value; 0 skips it.
    #[arg(long, default_value_t = lotkaian_core::powerlaw::DEFAULT_REPLICAS)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = lotkaian_core::pipeline::DEFAULT_SEED)]
    pub seed: u64,
}

fn parse_xmin(s: &str) -> Result<XminPolicy, String> {
    s.parse()
}

fn parse_level(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
        _ => Err(format!("expected a number in [0, 1], got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Citation exports (CSV with at least Cites and Title columns).
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Author name; defaults to the file name. Only valid with one input.
    #[arg(long)]
    pub author: Option<String>,
    #[arg(long)]
    pub prize_year: Option<i32>,
    #[command(flatten)]
    pub fit: FitOptions,
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u16).range(2..))]
    pub bins: u16,
    /// Primary regression mode used for the verdict and figure 4.
    #[arg(long, value_enum, default_value_t = ModeArg::Raw)]
    pub mode: ModeArg,
    /// Count empty log bins as one instead of dropping them.
    #[arg(long)]
    pub keep_empty_bins: bool,
    /// Table format; both are written when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, env = OUT_ENV, default_value = DEFAULT_OUT)]
    pub out: PathBuf,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
    /// Title similarity for merging duplicate records.
    #[arg(long, default_value_t = lotkaian_core::ingest::DEFAULT_MERGE_THRESHOLD, value_parser = parse_level)]
    pub merge_threshold: f64,
    #[arg(long, conflicts_with = "merge_threshold")]
    pub no_merge: bool,
    /// Field delimiter of the input files.
    #[arg(long, default_value = ",")]
    pub delimiter: char,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// File of citation counts, one per line or comma separated; `-` reads stdin.
    pub values: PathBuf,
    #[command(flatten)]
    pub fit: FitOptions,
}

#[derive(Debug, Args)]
pub struct BinsArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u16).range(2..))]
    pub bins: u16,
    #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
    pub scale: ScaleArg,
    /// Bin only the h-core.
    #[arg(long)]
    pub core: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// `report.json` files written by `analyze`.
    #[arg(required = true)]
    pub reports: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Also write the figures of every report below this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(subcommand)]
    pub model: Model,
    #[arg(long, global = true, default_value_t = lotkaian_core::pipeline::DEFAULT_SEED)]
    pub seed: u64,
    /// Emit a JSON run record instead of one value per line.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Model {
    /// Discrete power law on k >= x_min.
    Zeta {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        xmin: u64,
        #[arg(short, long)]
        n: usize,
    },
    Poisson {
        #[arg(long)]
        lambda: f64,
        #[arg(short, long)]
        n: usize,
    },
    Lognormal {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(short, long)]
        n: usize,
    },
    /// Pólya-Eggenberger urn; prints 1 for white and 0 for black draws.
    Urn {
        #[arg(long, default_value_t = 1)]
        white: u64,
        #[arg(long, default_value_t = 1)]
        black: u64,
        #[arg(long, default_value_t = 1)]
        additions: u64,
        #[arg(long)]
        draws: usize,
    },
    /// Ijiri-Simon growth process; prints the element sizes.
    Simon {
        #[arg(long)]
        p_new: f64,
        #[arg(long)]
        units: u64,
    },
}
