//! Batch front end. Each subcommand runs one library operation, writes a
//! CSV table (stdout or `--out`), a JSON run manifest and optionally an SVG
//! figure.
//!
//! Exit codes: 0 on success, 1 on usage or numerical errors, 2 when a
//! point-count or transversality invariant fails.

pub mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{przytycki_fit, przytycki_gap, spherical_derivative_sup, ParamPoint};
use crate::error::{Error, Result};
use crate::loci::{
    centers_cubic, centers_cubic_homotopy, centers_unicritical, cubic_multiplier_locus, multiplier_locus,
    preimage_locus, HomotopyOptions, LocusResult, SeedGrid,
};
use crate::measures::{
    bump, discrepancy_series, harmonic_sample, pair, rate_fit, PointMeasure, RateModel, Reference,
};
use io::{emit, parse_complex, point_rows, read_series, scatter_svg, series_svg, write_points, write_series};

/// Environment variable for the worker thread count.
pub const THREADS_ENV: &str = "POLYDYN_THREADS";

#[derive(Parser, Debug)]
#[command(name = "polydyn", version, about = "Parameter-space experiments for polynomial dynamics")]
pub struct Cli {
    /// Worker threads (overrides POLYDYN_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct Output {
    /// CSV destination; stdout when absent. The manifest goes to
    /// `<stem of out>.manifest.json`, or to stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional SVG figure.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Centers of hyperbolic components of z^d + c.
    Centers {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        /// Exact period n only.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Parameters of z^d + c with an n-cycle of multiplier w.
    Multiplier {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
        /// Include cycles of every period k | n (multiplier w^{k/n}).
        #[arg(long)]
        all_periods: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Cubic parameters (c1, a) where both critical points are periodic.
    CubicCenters {
        #[arg(long)]
        n0: u32,
        #[arg(long)]
        n1: u32,
        #[arg(long, value_enum, default_value_t = CubicSolver::Homotopy)]
        solver: CubicSolver,
        #[command(flatten)]
        output: Output,
    },
    /// Cubic parameters with attracting cycles of prescribed multipliers.
    CubicMultiplier {
        #[arg(long)]
        n0: u32,
        #[arg(long)]
        n1: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w0: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w1: Complex64,
        #[command(flatten)]
        output: Output,
    },
    /// Parameters c with p_c^n(0) = z.
    Preimages {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[command(flatten)]
        output: Output,
    },
    /// Harmonic measure of M_d sampled by external ray endpoints.
    Harmonic {
        #[arg(long)]
        d: u32,
        /// Number of rays.
        #[arg(long, default_value_t = 4096)]
        k: usize,
        #[arg(long, default_value_t = 1e-6)]
        t_min: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Discrepancy series of center (or preimage) measures against a bump.
    Discrepancy {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "-0.5")]
        center: Complex64,
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = Mode::Successive)]
        mode: Mode,
        /// Use preimages of this point instead of centers.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Option<Complex64>,
        /// Rays for the harmonic reference.
        #[arg(long, default_value_t = 4096)]
        k: usize,
        #[arg(long, default_value_t = 1e-6)]
        t_min: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Least-squares rate fit of a discrepancy file.
    Ratefit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        d: u32,
        /// JSON destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chordal gaps between a critical point and its orbit.
    Przytycki {
        #[arg(long)]
        d: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c: Complex64,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Grid size for the spherical-derivative supremum.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubicSolver {
    Homotopy,
    Multistart,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Successive,
    /// Against the harmonic measure sampled with `--k` rays.
    Reference,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    #[value(name = "n_over_dn")]
    NOverDn,
    #[value(name = "free_slope")]
    FreeSlope,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub version: String,
    pub wall_time_s: f64,
    pub threads: usize,
    pub outputs: Vec<String>,
    pub failures: Vec<String>,
}

#[derive(Debug, Serialize)]
struct RateSummary {
    #[serde(rename = "C_hat")]
    c_hat: Option<f64>,
    r2: f64,
    n_min: u32,
    n_max: u32,
    slope: f64,
    intercept: f64,
    spread: Option<f64>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CountMismatch { .. } | Error::TransversalityViolation { .. } => 2,
        _ => 1,
    }
}

/// Thread count from the flag, then the environment, then rayon's default.
fn threads(flag: Option<usize>) -> std::result::Result<usize, String> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("{THREADS_ENV}={v} is not a thread count")),
        Err(_) => Ok(0),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Centers { .. } => "centers",
        Command::Multiplier { .. } => "multiplier",
        Command::CubicCenters { .. } => "cubic-centers",
        Command::CubicMultiplier { .. } => "cubic-multiplier",
        Command::Preimages { .. } => "preimages",
        Command::Harmonic { .. } => "harmonic",
        Command::Discrepancy { .. } => "discrepancy",
        Command::Ratefit { .. } => "ratefit",
        Command::Przytycki { .. } => "przytycki",
    }
}

fn output_of(c: &Command) -> (Option<&Path>, Option<&Path>) {
    match c {
        Command::Centers { output, .. }
        | Command::Multiplier { output, .. }
        | Command::CubicCenters { output, .. }
        | Command::CubicMultiplier { output, .. }
        | Command::Preimages { output, .. }
        | Command::Harmonic { output, .. }
        | Command::Discrepancy { output, .. }
        | Command::Przytycki { output, .. } => (output.out.as_deref(), output.plot.as_deref()),
        Command::Ratefit { out, .. } => (out.as_deref(), None),
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().map(OsString::from).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn write_locus(locus: &LocusResult, out: Option<&Path>, plot: Option<&Path>, outputs: &mut Vec<String>) -> Result<()> {
    emit(out, |w| write_points(w, &point_rows(locus)))?;
    if let Some(p) = plot {
        std::fs::write(p, scatter_svg(&locus.points))?;
        outputs.push(p.display().to_string());
    }
    Ok(())
}

fn execute(command: &Command, outputs: &mut Vec<String>) -> Result<()> {
    let (out, plot) = output_of(command);
    if let Some(o) = out {
        outputs.push(o.display().to_string());
    }
    match command {
        Command::Centers { d, n, exact, .. } => write_locus(&centers_unicritical(*d, *n, *exact)?, out, plot, outputs),
        Command::Multiplier {
            d, n, w, all_periods, ..
        } => {
            let locus = multiplier_locus(*d, *n, *w)?;
            let locus = if *all_periods { locus } else { locus.with_tag(*n) };
            write_locus(&locus, out, plot, outputs)
        }
        Command::CubicCenters { n0, n1, solver, .. } => {
            let locus = match solver {
                CubicSolver::Homotopy => centers_cubic_homotopy(*n0, *n1, &HomotopyOptions::default())?.0,
                CubicSolver::Multistart => centers_cubic(*n0, *n1, &SeedGrid::default())?,
            };
            write_locus(&locus, out, plot, outputs)
        }
        Command::CubicMultiplier { n0, n1, w0, w1, .. } => {
            write_locus(&cubic_multiplier_locus(*n0, *n1, *w0, *w1)?, out, plot, outputs)
        }
        Command::Preimages { d, n, z, .. } => write_locus(&preimage_locus(*d, *n, *z)?, out, plot, outputs),
        Command::Harmonic { d, k, t_min, .. } => {
            let sample = harmonic_sample(*d, *k, *t_min)?;
            if !sample.failed.is_empty() {
                eprintln!("warning: {} of {k} rays failed; weights renormalized", sample.failed.len());
            }
            let rows: Vec<io::PointRow> = sample
                .measure
                .points
                .iter()
                .map(|p| io::PointRow {
                    coords: p.params(),
                    residual: 0.0,
                })
                .collect();
            emit(out, |w| write_points(w, &rows))?;
            if let Some(p) = plot {
                std::fs::write(p, scatter_svg(&sample.measure.points))?;
                outputs.push(p.display().to_string());
            }
            Ok(())
        }
        Command::Discrepancy {
            d,
            n_min,
            n_max,
            center,
            radius,
            mode,
            z,
            k,
            t_min,
            ..
        } => {
            if n_min > n_max {
                return Err(Error::Domain(format!("n_min={n_min} exceeds n_max={n_max}")));
            }
            let phi = bump(&[*center], *radius)?;
            let last = match mode {
                Mode::Successive => *n_max + 1,
                Mode::Reference => *n_max,
            };
            let sequence: Vec<(u32, PointMeasure)> = (*n_min..=last)
                .map(|n| {
                    let locus = match z {
                        Some(z) => preimage_locus(*d, n, *z)?,
                        None => centers_unicritical(*d, n, false)?,
                    };
                    Ok((n, PointMeasure::from_locus(&locus)?))
                })
                .collect::<Result<_>>()?;
            let series = match mode {
                Mode::Successive => discrepancy_series(&sequence, Reference::Successive, &phi)?,
                Mode::Reference => {
                    let nu = harmonic_sample(*d, *k, *t_min)?;
                    eprintln!("harmonic reference: pair = {}", pair(&nu.measure, &phi)?);
                    discrepancy_series(&sequence, Reference::Measure(&nu.measure), &phi)?
                }
            };
            emit(out, |w| write_series(w, &series))?;
            if let Some(p) = plot {
                std::fs::write(p, series_svg(&series))?;
                outputs.push(p.display().to_string());
            }
            Ok(())
        }
        Command::Ratefit { input, model, d, .. } => {
            let series = read_series(std::fs::File::open(input)?)?;
            let model = match model {
                Model::NOverDn => RateModel::NOverDn,
                Model::FreeSlope => RateModel::FreeSlope,
            };
            let fit = rate_fit(&series, model, *d)?;
            let summary = RateSummary {
                c_hat: fit.c_hat,
                r2: fit.r_squared,
                n_min: fit.n_range.0,
                n_max: fit.n_range.1,
                slope: fit.slope,
                intercept: fit.intercept,
                spread: fit.spread,
            };
            emit(out, |w| {
                serde_json::to_writer_pretty(&mut *w, &summary)?;
                writeln!(w)?;
                Ok(())
            })
        }
        Command::Przytycki { d, c, n_max, grid, .. } => {
            let p = ParamPoint::unicritical(*d, *c)?;
            let gaps = przytycki_gap(&p, 0, *n_max)?;
            let m_hat = spherical_derivative_sup(&p, *grid);
            match przytycki_fit(&gaps, m_hat) {
                Ok(fit) => eprintln!(
                    "kappa_hat = {}, M_hat = {}, decay rate = {}",
                    fit.kappa_hat, fit.m_hat, fit.decay_rate
                ),
                Err(e) => eprintln!("no fit: {e}"),
            }
            let series: Vec<(u32, f64)> = gaps.iter().map(|&(n, g)| (n as u32, g)).collect();
            emit(out, |w| {
                let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
                wr.write_record(["n", "gap"])?;
                for (n, g) in &series {
                    wr.write_record([n.to_string(), io::fmt_f64(*g)])?;
                }
                wr.flush()?;
                Ok(())
            })?;
            if let Some(path) = plot {
                std::fs::write(path, series_svg(&series))?;
                outputs.push(path.display().to_string());
            }
            Ok(())
        }
    }
}


/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let n_threads = match threads(cli.threads) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    if n_threads > 0 {
        // Fails only if the pool already exists, e.g. when called twice in
        // one process; the existing pool is then used.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n_threads).build_global();
    }
    let start = Instant::now();
    let mut outputs = Vec::new();
    let result = execute(&cli.command, &mut outputs);
    let mut manifest = RunManifest {
        command: command_name(&cli.command).to_string(),
        parameters: serde_json::to_value(&cli.command).unwrap_or(serde_json::Value::Null),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: start.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
        outputs,
        failures: Vec::new(),
    };
    let code = match &result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            manifest.failures.push(e.to_string());
            exit_code(e)
        }
    };
    let text = serde_json::to_string_pretty(&manifest).unwrap_or_default();
    match output_of(&cli.command).0 {
        Some(out) => {
            if let Err(e) = std::fs::write(manifest_path(out), text + "\n") {
                eprintln!("error: cannot write manifest: {e}");
                return code.max(1);
            }
        }
        None => eprintln!("{text}"),
    }
    code
}
