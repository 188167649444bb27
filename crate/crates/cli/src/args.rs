use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use specwave::adr::{KprimeSource, Probe, DEFAULT_NX, DEFAULT_TAU};
use specwave::schemes::SchemeSpec;
use specwave::timeint::TimeKind;

#[derive(Debug, Parser)]
#[command(name = "specwave", version, about = "Spectral and group-velocity analysis of finite-difference schemes")]
#[command(args_override_self = true)]
pub struct Cli {
    /// `key = value` file supplying flag values; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Modified-wavenumber table of a scheme, written as CSV.
    Spectrum(SpectrumArgs),
    /// Group-velocity-preservation map over (kappa, omega dt).
    Gvpmap(GvpmapArgs),
    /// Direct simulation of advection or the coupled system.
    Simulate(SimulateArgs),
    /// Group or phase velocity measured from ADR runs or stored snapshots.
    Measure(MeasureArgs),
    /// Reference benchmark comparisons.
    Reproduce(ReproduceArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Gvpmap(_) => "gvpmap",
            Command::Simulate(_) => "simulate",
            Command::Measure(_) => "measure",
            Command::Reproduce(_) => "reproduce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Upw5,
    Weno5js,
    Weno5m,
}

impl SchemeArg {
    pub fn spec(self) -> SchemeSpec {
        match self {
            SchemeArg::Upw5 => SchemeSpec::upw5(),
            SchemeArg::Weno5js => SchemeSpec::weno5_js(),
            SchemeArg::Weno5m => SchemeSpec::weno5_m(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TimeArg {
    Euler,
    Rk3,
    Rk4,
}

impl From<TimeArg> for TimeKind {
    fn from(t: TimeArg) -> Self {
        match t {
            TimeArg::Euler => TimeKind::Euler,
            TimeArg::Rk3 => TimeKind::Rk3,
            TimeArg::Rk4 => TimeKind::Rk4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Adr,
    AdrNt,
}

impl From<MethodArg> for KprimeSource {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Analytic => KprimeSource::Analytic,
            MethodArg::Adr => KprimeSource::Adr,
            MethodArg::AdrNt => KprimeSource::AdrNt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeArg {
    Complex,
    Cosine,
}

impl From<ProbeArg> for Probe {
    fn from(p: ProbeArg) -> Self {
        match p {
            ProbeArg::Complex => Probe::Complex,
            ProbeArg::Cosine => Probe::Cosine,
        }
    }
}

/// Probe-mode settings shared by `spectrum` and `gvpmap`.
#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    /// ADR evolution time.
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
    /// ADR time step; defaults to tau.
    #[arg(long)]
    pub dt: Option<f64>,
    /// ADR time integrator.
    #[arg(long, value_enum, default_value = "euler")]
    pub time: TimeArg,
    /// Number of initial phases averaged.
    #[arg(long, default_value_t = 1)]
    pub phases: usize,
    /// Seed for the phase draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "complex")]
    pub probe: ProbeArg,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long)]
    pub nx: usize,
    #[command(flatten)]
    pub probe: ProbeArgs,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GvpmapArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// Integrator whose group velocity is mapped.
    #[arg(long = "time", value_enum)]
    pub map_time: TimeArg,
    #[arg(long)]
    pub sigma: f64,
    /// Points per axis.
    #[arg(long, default_value_t = specwave::qldrp::DEFAULT_RESOLUTION)]
    pub resolution: usize,
    /// Source of kappa'; analytic for UPW5 and adr-nt otherwise when absent.
    #[arg(long, value_enum)]
    pub kprime: Option<MethodArg>,
    /// Grid of the kappa' table.
    #[arg(long, default_value_t = DEFAULT_NX)]
    pub nx: usize,
    /// ADR evolution time.
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
    /// ADR time step; defaults to tau.
    #[arg(long)]
    pub dt: Option<f64>,
    /// ADR time integrator.
    #[arg(long, value_enum, default_value = "euler")]
    pub adr_time: TimeArg,
    #[arg(long, default_value_t = 1)]
    pub phases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Advection,
    Coupled,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "advection")]
    pub problem: ProblemArg,
    #[arg(long, value_enum, default_value = "upw5")]
    pub scheme: SchemeArg,
    #[arg(long, value_enum, default_value = "rk4")]
    pub time: TimeArg,
    /// Advection speed.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Wavelengths of the initial sine across the domain (advection).
    #[arg(long, default_value_t = 1)]
    pub waves: usize,
    /// Speed of p; must equal w2/k2 when given (coupled).
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub w1: Option<f64>,
    #[arg(long)]
    pub k2: Option<f64>,
    #[arg(long)]
    pub w2: Option<f64>,
    #[arg(long)]
    pub nx: usize,
    #[arg(long)]
    pub dt: f64,
    #[arg(long = "T")]
    pub t_final: f64,
    /// Periodic domain as `lo,hi`.
    #[arg(long, allow_hyphen_values = true, default_value = "0,6.283185307179586")]
    pub domain: String,
    /// Stored snapshots in addition to t = 0.
    #[arg(long, default_value_t = specwave::waves::DEFAULT_SNAPSHOTS)]
    pub snapshots: usize,
    /// Write the exact solution instead of running a scheme.
    #[arg(long)]
    pub exact: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureMethod {
    Dft,
    Envelope,
    Peak,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    #[arg(long, value_enum)]
    pub method: MeasureMethod,
    /// Directory written by `simulate` (envelope, peak).
    #[arg(long)]
    pub run: Option<PathBuf>,
    /// Start of the measurement interval; first snapshot when absent.
    #[arg(long)]
    pub t_a: Option<f64>,
    /// End of the measurement interval; last snapshot when absent.
    #[arg(long)]
    pub t_b: Option<f64>,
    #[arg(long, value_enum, default_value = "weno5js")]
    pub scheme: SchemeArg,
    #[arg(long, value_enum, default_value = "rk4")]
    pub time: TimeArg,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// ADR evolution time; defaults to dt.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Target reduced wavenumber (dft).
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Mode offset either side of the target (dft).
    #[arg(long, default_value_t = 1)]
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Table2,
    Fig12,
    Fig3,
    Fig6,
    Fig7,
    Fig9,
    Sec51Ratios,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum)]
    pub target: TargetArg,
    /// Directory for the report, plots and manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
