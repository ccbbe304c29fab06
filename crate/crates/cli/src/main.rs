//! `nanotrap`: polarizability sweeps, magic wavelengths, hyperfine light
//! shifts, nanofiber mode profiles and two-color trap potentials.
//!
//! Data goes to stdout as CSV (default) or JSON. Exit status is 0 on success,
//! 2 on usage errors (bad flags, numbers, ranges, levels or data files) and 1
//! when a computation fails.

use std::fmt;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nanotrap::AtomDatabase;

mod commands;
mod output;
mod sweep;

use output::Table;
use sweep::{Sweep, Window};

#[derive(Debug, Parser)]
#[command(name = "nanotrap", version, about = "Cesium light shifts, magic wavelengths and nanofiber trap profiles")]
struct Cli {
    /// Atomic data file; overrides NANOTRAP_DATA and the bundled cesium data.
    #[arg(long, global = true, value_name = "PATH")]
    data: Option<PathBuf>,

    /// Output format [default: json for `magic`, csv otherwise].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Suppress the metadata header (CSV `# ` lines, JSON `meta` object).
    #[arg(long, global = true)]
    no_meta: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scalar and tensor polarizability of one level over a wavelength sweep.
    Polarizability(PolarizabilityArgs),
    /// Wavelengths where upper and lower stretched-state polarizabilities cross.
    Magic(MagicArgs),
    /// Hyperfine-resolved transition light shifts in a uniform field.
    Shift(ShiftArgs),
    /// HE11 field components of a nanofiber versus radius.
    Mode(ModeArgs),
    /// Two-color evanescent trap potentials versus distance from the fiber axis.
    Trap(TrapArgs),
}

#[derive(Debug, Args)]
pub struct PolarizabilityArgs {
    /// Level label, e.g. 6S1/2.
    #[arg(long, default_value = "6S1/2")]
    pub state: String,
    /// Wavelengths in nm as START:STOP:STEP (inclusive) or a single value.
    #[arg(long = "lambda-nm", value_name = "START:STOP:STEP")]
    pub lambda_nm: Sweep,
    /// Drop the linewidth terms (plain dispersive sum).
    #[arg(long)]
    pub no_damping: bool,
}

#[derive(Debug, Args)]
pub struct MagicArgs {
    #[arg(long, default_value = "6P3/2")]
    pub upper: String,
    #[arg(long, default_value = "6S1/2")]
    pub lower: String,
    /// Search window in nm, START:STOP.
    #[arg(long = "window-nm", value_name = "START:STOP")]
    pub window_nm: Window,
    /// Scan grid step, nm.
    #[arg(long = "step-nm", default_value_t = 0.02)]
    pub step_nm: f64,
    /// Half-width excluded around each transition pole, nm.
    #[arg(long = "guard-nm", default_value_t = 0.5)]
    pub guard_nm: f64,
    #[arg(long)]
    pub no_damping: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Polarization {
    /// Linear along the quantization axis.
    Z,
    SigmaPlus,
    SigmaMinus,
}

#[derive(Debug, Args)]
pub struct ShiftArgs {
    #[arg(long, default_value = "6P3/2")]
    pub upper: String,
    #[arg(long, default_value = "6S1/2")]
    pub lower: String,
    /// Wavelengths in nm, START:STOP:STEP or a single value.
    #[arg(long = "lambda-nm", value_name = "START:STOP:STEP")]
    pub lambda_nm: Sweep,
    /// Intensities in MW/cm², START:STOP:STEP or a single value.
    #[arg(long = "intensity-mw-cm2", value_name = "START:STOP:STEP", default_value = "1")]
    pub intensity: Sweep,
    /// Restrict to one hyperfine family of the upper level, e.g. 5.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, value_enum, default_value_t = Polarization::Z)]
    pub polarization: Polarization,
}

#[derive(Debug, Args)]
pub struct ModeArgs {
    /// Fiber radius, µm.
    #[arg(long = "a-um", default_value_t = 0.2)]
    pub a_um: f64,
    #[arg(long = "lambda-nm")]
    pub lambda_nm: f64,
    /// Guided power, mW.
    #[arg(long = "power-mw", default_value_t = 1.0)]
    pub power_mw: f64,
    /// Core index [default: fused silica at the wavelength].
    #[arg(long)]
    pub n1: Option<f64>,
    /// Cladding index.
    #[arg(long, default_value_t = 1.0)]
    pub n2: f64,
    /// Outer edge of the radial grid, µm from the axis [default: a + 1 µm].
    #[arg(long = "r-max-um")]
    pub r_max_um: Option<f64>,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct TrapArgs {
    #[arg(long = "a-um", default_value_t = 0.2)]
    pub a_um: f64,
    #[arg(long = "red-nm", default_value_t = 934.5)]
    pub red_nm: f64,
    #[arg(long = "red-mw", default_value_t = 11.5)]
    pub red_mw: f64,
    #[arg(long = "blue-nm", default_value_t = 685.5)]
    pub blue_nm: f64,
    #[arg(long = "blue-mw", default_value_t = 48.5)]
    pub blue_mw: f64,
    /// Core index at the red wavelength [default: fused silica].
    #[arg(long = "red-n1")]
    pub red_n1: Option<f64>,
    /// Core index at the blue wavelength [default: fused silica].
    #[arg(long = "blue-n1")]
    pub blue_n1: Option<f64>,
    /// Grid reaches this far beyond the surface, µm.
    #[arg(long = "span-um", default_value_t = 2.0)]
    pub span_um: f64,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Excited hyperfine family to track.
    #[arg(long, default_value = "5")]
    pub family: String,
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(nanotrap::Error),
    Io(io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Compute(_) | Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Compute(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<nanotrap::Error> for Failure {
    fn from(e: nanotrap::Error) -> Self {
        Failure::Compute(e)
    }
}

/// Loads the atomic data: `--data`, then `NANOTRAP_DATA`, then the bundled file.
fn load_data(flag: Option<&PathBuf>) -> Result<(AtomDatabase, String), Failure> {
    let (path, origin) = match flag {
        Some(p) => (p.clone(), "--data"),
        None => match std::env::var_os("NANOTRAP_DATA").filter(|v| !v.is_empty()) {
            Some(p) => (PathBuf::from(p), "NANOTRAP_DATA"),
            None => return Ok((AtomDatabase::cesium(), "bundled cesium data".into())),
        },
    };
    if !path.is_file() {
        return Err(Failure::Usage(format!("{origin}: no such data file: {}", path.display())));
    }
    let db = AtomDatabase::load(&path).map_err(|e| Failure::Usage(format!("{origin}: {}: {e}", path.display())))?;
    Ok((db, path.display().to_string()))
}

fn run(cli: &Cli) -> Result<(Table, Format), Failure> {
    let (db, source) = load_data(cli.data.as_ref())?;
    let (mut table, default) = match &cli.command {
        Command::Polarizability(a) => (commands::polarizability(&db, a)?, Format::Csv),
        Command::Magic(a) => (commands::magic(&db, a)?, Format::Json),
        Command::Shift(a) => (commands::shift(&db, a)?, Format::Csv),
        Command::Mode(a) => (commands::mode(a)?, Format::Csv),
        Command::Trap(a) => (commands::trap(&db, a)?, Format::Csv),
    };
    table.meta.insert(0, ("generator".into(), format!("nanotrap {}", env!("CARGO_PKG_VERSION"))));
    table.meta.insert(1, ("data".into(), source));
    Ok((table, cli.format.unwrap_or(default)))
}

fn emit(table: &Table, format: Format, with_meta: bool) -> io::Result<()> {
    let mut out = BufWriter::new(io::stdout().lock());
    match format {
        Format::Csv => table.write_csv(&mut out, with_meta)?,
        Format::Json => table.write_json(&mut out, with_meta)?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|(table, format)| emit(&table, format, !cli.no_meta).map_err(Failure::Io));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
