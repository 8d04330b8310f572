//! Command-line front end. Every command writes CSV; errors surface as one
//! `error:` line and an exit status from [`FrftError::exit_code`].

use std::f64::consts::FRAC_PI_4;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::assets::Asset;
use crate::corpus::DEFAULT_SEED;
use crate::error::{FrftError, Result};
use crate::frft::{
    default_output_grid, frft_with, inverse_frft_with, Bandwidth, FrftMethod, FrftOptions, DEFAULT_DELTA_SING,
};
use crate::io::{read_signal_file, write_signal, write_signal_file};
use crate::means::{
    frac_convolve, poisson_kernel, recover, recovery_table, weierstrass_kernel, write_recovery, EpsilonSchedule,
    MeanKind, MeanSpec,
};
use crate::multiplier::{frac_hilbert_mult, frac_hilbert_pv, lp_square_function, partial_sum_mult, Band};
use crate::signal::{LpExponent, Signal, UniformGrid};
use crate::validation::{chirp_u_demo_data, run_suites, suite_names};

#[derive(Debug, Parser)]
#[command(name = "frft-lab", version, about = "Fractional Fourier transform lab")]
pub struct Cli {
    /// Seed for the random corpora.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward transform of order alpha.
    Frft(TransformArgs),
    /// Inverse transform (order -alpha).
    Invert(TransformArgs),
    /// Abel or Gauss recovery from sampled transform values.
    Recover(RecoverArgs),
    /// Fractional convolution with a file or a summability kernel.
    Convolve(ConvolveArgs),
    /// Fractional Hilbert transform.
    Hilbert(HilbertArgs),
    /// Partial sum over a band of the transform variable.
    Partialsum(PartialSumArgs),
    /// Littlewood-Paley square function.
    Lpdecomp(LpArgs),
    /// Run property suites and print a pass/fail table.
    Check(CheckArgs),
    /// Canned experiments.
    Demo(DemoArgs),
}

fn parse_grid(s: &str) -> std::result::Result<UniformGrid, String> {
    UniformGrid::parse_spec(s).map_err(|e| e.to_string())
}

fn parse_eps_list(s: &str) -> std::result::Result<EpsilonSchedule, String> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad eps value '{v}'")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    EpsilonSchedule::new(values).map_err(|e| e.to_string())
}

/// Where the input signal comes from.
#[derive(Debug, Args)]
pub struct Source {
    /// Input signal file (`t,re,im`).
    #[arg(long = "in", value_name = "PATH", conflicts_with = "asset")]
    pub input: Option<PathBuf>,

    /// Built-in signal instead of a file.
    #[arg(long, value_parser = clap::builder::ValueParser::new(|s: &str| s.parse::<Asset>().map_err(|e| e.to_string())))]
    pub asset: Option<Asset>,

    /// Sampling grid for `--asset` (defaults to `--grid`).
    #[arg(long, value_name = "START:STEP:COUNT", allow_hyphen_values = true, value_parser = parse_grid)]
    pub asset_grid: Option<UniformGrid>,

    /// Chirp order of `expchirp`.
    #[arg(long, default_value_t = FRAC_PI_4, allow_hyphen_values = true)]
    pub asset_alpha: f64,

    /// Kernel parameter of `poisson` and `weierstrass`.
    #[arg(long, default_value_t = 1.0)]
    pub asset_eps: f64,
}

impl Source {
    fn load(&self, grid: Option<&UniformGrid>) -> Result<Signal> {
        match (&self.input, &self.asset) {
            (Some(path), _) => read_signal_file(path),
            (None, Some(asset)) => {
                let g = self
                    .asset_grid
                    .as_ref()
                    .or(grid)
                    .ok_or_else(|| FrftError::Parse("--asset needs --asset-grid or --grid".into()))?;
                asset.sample(*g, self.asset_alpha, self.asset_eps)
            }
            (None, None) => Err(FrftError::Parse("one of --in or --asset is required".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Fast,
    Direct,
}

impl From<MethodArg> for FrftMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fast => FrftMethod::FastChirp,
            MethodArg::Direct => FrftMethod::DirectQuadrature,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MeanArg {
    Abel,
    Gauss,
}

impl From<MeanArg> for MeanKind {
    fn from(m: MeanArg) -> Self {
        match m {
            MeanArg::Abel => MeanKind::Abel,
            MeanArg::Gauss => MeanKind::Gauss,
        }
    }
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,

    /// Output grid; defaults to the input grid.
    #[arg(long, value_name = "START:STEP:COUNT", allow_hyphen_values = true, value_parser = parse_grid)]
    pub grid: Option<UniformGrid>,

    #[command(flatten)]
    pub source: Source,

    #[arg(long, value_enum, default_value_t = MethodArg::Fast)]
    pub method: MethodArg,

    /// Frequency bound of the input before chirping.
    #[arg(long, default_value_t = 0.0)]
    pub bandwidth: f64,

    /// Treat `--bandwidth` as the bound of the chirp-demodulated input.
    #[arg(long)]
    pub demodulated: bool,

    #[arg(long, default_value_t = DEFAULT_DELTA_SING)]
    pub delta_sing: f64,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,

    /// Grid of the recovered signal.
    #[arg(long, value_name = "START:STEP:COUNT", allow_hyphen_values = true, value_parser = parse_grid)]
    pub grid: UniformGrid,

    /// Sampled transform values.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,

    /// Signal to measure L1 errors against.
    #[arg(long, value_name = "PATH")]
    pub reference: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = MeanArg::Abel)]
    pub mean: MeanArg,

    /// Strictly decreasing comma-separated list.
    #[arg(long, value_parser = parse_eps_list, default_value = "1,0.1,0.01")]
    pub eps: EpsilonSchedule,

    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,

    #[command(flatten)]
    pub source: Source,

    /// Second factor read from a file.
    #[arg(long, value_name = "PATH", conflicts_with = "mean")]
    pub with: Option<PathBuf>,

    /// Second factor as the Poisson (abel) or Weierstrass (gauss) kernel at `--eps`.
    #[arg(long, value_enum)]
    pub mean: Option<MeanArg>,

    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,

    #[arg(long, value_name = "START:STEP:COUNT", allow_hyphen_values = true, value_parser = parse_grid)]
    pub grid: Option<UniformGrid>,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HilbertRoute {
    Multiplier,
    Pv,
}

#[derive(Debug, Args)]
pub struct HilbertArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,

    #[command(flatten)]
    pub source: Source,

    #[arg(long, value_name = "START:STEP:COUNT", allow_hyphen_values = true, value_parser = parse_grid)]
    pub grid: Option<UniformGrid>,

    #[arg(long, value_enum, default_value_t = HilbertRoute::Multiplier)]
    pub route: HilbertRoute,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PartialSumArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,

    #[command(flatten)]
    pub source: Source,

    #[arg(long, value_name = "START:STEP:COUNT", allow_hyphen_values = true, value_parser = parse_grid)]
    pub grid: Option<UniformGrid>,

    /// Lower band edge in the transform variable.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: f64,

    #[arg(long, allow_hyphen_values = true)]
    pub hi: f64,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LpArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,

    #[command(flatten)]
    pub source: Source,

    #[arg(long, value_name = "START:STEP:COUNT", allow_hyphen_values = true, value_parser = parse_grid)]
    pub grid: Option<UniformGrid>,

    #[arg(long, default_value_t = 2.0)]
    pub p: f64,

    #[arg(long, allow_hyphen_values = true, default_value_t = -8)]
    pub j_min: i32,

    #[arg(long, allow_hyphen_values = true, default_value_t = 6)]
    pub j_max: i32,

    /// File for the square function; the `p,norm,ratio` row goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Suite to run; repeatable. All suites when absent.
    #[arg(long)]
    pub suite: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DemoName {
    /// Abel recovery of the chirp `u` from its order pi/4 transform.
    Chirp,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub name: DemoName,

    /// Output directory.
    #[arg(long, default_value = "demo_chirp")]
    pub out: PathBuf,
}

fn emit(signal: &Signal, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_signal_file(path, signal),
        None => write_signal(stdout, signal),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| FrftError::Io(format!("{}: {e}", dir.display())))
}

fn transform(args: &TransformArgs, inverse: bool, stdout: &mut dyn Write) -> Result<()> {
    let f = args.source.load(args.grid.as_ref())?;
    let out = args.grid.unwrap_or_else(|| default_output_grid(f.grid()));
    let bandwidth =
        if args.demodulated { Bandwidth::Demodulated(args.bandwidth) } else { Bandwidth::Signal(args.bandwidth) };
    let opts = FrftOptions { delta_sing: args.delta_sing, bandwidth };
    let g = if inverse {
        inverse_frft_with(&f, args.alpha, &out, args.method.into(), &opts)?
    } else {
        frft_with(&f, args.alpha, &out, args.method.into(), &opts)?
    };
    emit(&g, &args.out, stdout)
}

fn recover_cmd(args: &RecoverArgs, stdout: &mut dyn Write) -> Result<()> {
    let transformed = read_signal_file(&args.input)?;
    let reference = args.reference.as_ref().map(read_signal_file).transpose()?;
    let steps = recover(&transformed, args.alpha, &args.mean.into(), &args.eps, &args.grid, reference.as_ref())?;
    create_dir(&args.out)?;
    write_recovery(&args.out, &steps)?;
    stdout.write_all(recovery_table(&steps).as_bytes())?;
    Ok(())
}

fn convolve_cmd(args: &ConvolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let f = args.source.load(args.grid.as_ref())?;
    let g = match (&args.with, args.mean) {
        (Some(path), _) => read_signal_file(path)?,
        (None, Some(kind)) => {
            let reach = (f.len() - 1) as f64 * f.grid().step();
            let grid = UniformGrid::symmetric(reach, f.grid().step())?;
            let spec = MeanSpec::new(kind.into(), args.eps)?;
            match kind {
                MeanArg::Abel => poisson_kernel(spec.kernel_parameter(), grid)?.signal,
                MeanArg::Gauss => weierstrass_kernel(spec.kernel_parameter(), grid)?.signal,
            }
        }
        (None, None) => return Err(FrftError::Parse("one of --with or --mean is required".into())),
    };
    emit(&frac_convolve(&f, &g, args.alpha)?, &args.out, stdout)
}

fn hilbert_cmd(args: &HilbertArgs, stdout: &mut dyn Write) -> Result<()> {
    let f = args.source.load(args.grid.as_ref())?;
    let h = match args.route {
        HilbertRoute::Multiplier => frac_hilbert_mult(&f, args.alpha)?,
        HilbertRoute::Pv => {
            let pv = frac_hilbert_pv(&f, args.alpha)?;
            if let Some(w) = &pv.warning {
                eprintln!("warning: {w}");
            }
            pv.signal
        }
    };
    emit(&h, &args.out, stdout)
}

fn lp_cmd(args: &LpArgs, stdout: &mut dyn Write) -> Result<()> {
    let f = args.source.load(args.grid.as_ref())?;
    let sq = lp_square_function(&f, args.alpha, args.j_min, args.j_max, LpExponent::new(args.p)?)?;
    if let Some(path) = &args.out {
        write_signal_file(path, &sq.square_fn)?;
    }
    writeln!(stdout, "p,norm,ratio\n{},{},{}", args.p, sq.norm, sq.ratio)?;
    Ok(())
}

fn check_cmd(args: &CheckArgs, seed: u64, stdout: &mut dyn Write) -> Result<()> {
    let known = suite_names();
    let names: Vec<&str> = if args.suite.is_empty() {
        known.clone()
    } else {
        args.suite
            .iter()
            .map(|s| {
                known
                    .iter()
                    .copied()
                    .find(|k| k == s)
                    .ok_or_else(|| FrftError::Parse(format!("unknown suite '{s}'; known: {}", known.join(", "))))
            })
            .collect::<Result<_>>()?
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| FrftError::Io(e.to_string());
    w.write_record(["suite", "pass", "value", "tolerance", "detail"]).map_err(csv_err)?;
    let mut failed = Vec::new();
    for (name, result) in run_suites(&names, seed) {
        let m = result?;
        if !m.pass {
            failed.push(name.clone());
        }
        let row = [name, m.pass.to_string(), format!("{:e}", m.value), format!("{:e}", m.tolerance), m.detail];
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| FrftError::Io(e.to_string()))?;
    stdout.write_all(&bytes)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(FrftError::ChecksFailed(failed.join(", ")))
    }
}

fn demo_chirp(dir: &Path, stdout: &mut dyn Write) -> Result<()> {
    let demo = chirp_u_demo_data()?;
    let steps = recover(
        &demo.transform,
        FRAC_PI_4,
        &MeanKind::Abel,
        &EpsilonSchedule::default(),
        demo.reference.grid(),
        Some(&demo.reference),
    )?;
    create_dir(dir)?;
    write_signal_file(dir.join("u.csv"), &demo.reference)?;
    write_signal_file(dir.join("frft_u.csv"), &demo.transform)?;
    write_recovery(dir, &steps)?;
    stdout.write_all(recovery_table(&steps).as_bytes())?;
    Ok(())
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Frft(a) => transform(a, false, stdout),
        Command::Invert(a) => transform(a, true, stdout),
        Command::Recover(a) => recover_cmd(a, stdout),
        Command::Convolve(a) => convolve_cmd(a, stdout),
        Command::Hilbert(a) => hilbert_cmd(a, stdout),
        Command::Partialsum(a) => {
            let f = a.source.load(a.grid.as_ref())?;
            emit(&partial_sum_mult(&f, Band { lo: a.lo, hi: a.hi }, a.alpha)?, &a.out, stdout)
        }
        Command::Lpdecomp(a) => lp_cmd(a, stdout),
        Command::Check(a) => check_cmd(a, cli.seed, stdout),
        Command::Demo(a) => match a.name {
            DemoName::Chirp => demo_chirp(&a.out, stdout),
        },
    }
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage");
            let line = line.strip_prefix("error: ").unwrap_or(line);
            let _ = writeln!(stderr, "error: {line}");
            return 2;
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
