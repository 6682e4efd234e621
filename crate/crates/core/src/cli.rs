//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid arguments, 2 domain errors,
//! 3 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::classify::{classify, diagram_grid};
use crate::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::helicoid::{helicoid_geometry, tau3_helicoid, HelicoidData};
use crate::hopf::{r_tension_cmc, tau3_hopf, triharmonic_residuals, KgJet};
use crate::report::render;
use crate::space::{BcvParams, FrameVec};
use crate::verify::{self, Suite, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bcv", version, about = "Higher-order harmonic surfaces in BCV spaces")]
pub struct Cli {
    /// TOML run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Existence of proper CMC r-harmonic Hopf cylinders.
    Classify(ClassifyArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// 3-tension of a Hopf cylinder with constant geodesic curvature.
    Tension3(Tension3Args),
    /// η-coefficient of the r-tension of a constant-curvature Hopf cylinder.
    Rtension(RtensionArgs),
    /// Classification diagram over (l, m).
    Diagram(DiagramArgs),
    /// Geometry and triharmonicity polynomials of a parabolic helicoid.
    Helicoid(HelicoidArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub l: f64,
    #[arg(long)]
    pub r: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub tol_first: Option<f64>,
    #[arg(long)]
    pub tol_second: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Tension3Args {
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub l: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: f64,
}

#[derive(Debug, Args)]
pub struct RtensionArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub l: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long)]
    pub r: u32,
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub lmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lmax: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mmax: Option<f64>,
    #[arg(long)]
    pub res: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HelicoidArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub l: f64,
}

#[derive(Debug, Serialize)]
struct Tension3Output {
    m: f64,
    l: f64,
    kappa: f64,
    x: f64,
    e3: f64,
    eta: f64,
    residuals: [f64; 3],
}

#[derive(Debug, Serialize)]
struct RtensionOutput {
    m: f64,
    l: f64,
    kappa: f64,
    r: u32,
    eta: f64,
}

#[derive(Debug, Serialize)]
struct HelicoidOutput {
    geometry: HelicoidData,
    #[serde(rename = "T")]
    t: [f64; 3],
    #[serde(rename = "corrected_T")]
    corrected_t: [f64; 3],
    tau3_printed: FrameVec,
    tau3_definition: FrameVec,
}

enum Outcome {
    Done,
    VerificationFailed,
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Error::Io(e.to_string()))
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    match &cli.config {
        Some(p) => RunConfig::load(p).map_err(|e| match e {
            Error::Io(msg) => Error::InvalidArgument(format!("cannot read {}: {msg}", p.display())),
            e => e,
        }),
        None => Ok(RunConfig::default()),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    let mut cfg = load_config(&cli)?;
    match cli.command {
        Command::Classify(a) => {
            emit(&json(&classify(a.m, a.l, a.r)?)?, None, out)?;
        }
        Command::Verify(a) => {
            cfg.samples = a.samples.unwrap_or(cfg.samples);
            cfg.seed = a.seed.unwrap_or(cfg.seed);
            cfg.fd.step = a.step.unwrap_or(cfg.fd.step);
            cfg.fd.tol_first = a.tol_first.unwrap_or(cfg.fd.tol_first);
            cfg.fd.tol_second = a.tol_second.unwrap_or(cfg.fd.tol_second);
            cfg.validate()?;
            let report: VerifyReport = verify::run(a.suite, &cfg);
            emit(&json(&report)?, a.out.as_ref().or(cfg.output.path.as_ref()), out)?;
            if !report.passed {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Tension3(a) => {
            let p = BcvParams::new(a.m, a.l);
            let kg = KgJet::constant(a.kappa);
            let t = tau3_hopf(&p, &kg);
            let o = Tension3Output {
                m: a.m,
                l: a.l,
                kappa: a.kappa,
                x: t.x,
                e3: t.e3,
                eta: t.eta,
                residuals: triharmonic_residuals(&p, &kg),
            };
            emit(&json(&o)?, None, out)?;
        }
        Command::Rtension(a) => {
            let eta = r_tension_cmc(&BcvParams::new(a.m, a.l), a.kappa, a.r)?;
            emit(&json(&RtensionOutput { m: a.m, l: a.l, kappa: a.kappa, r: a.r, eta })?, None, out)?;
        }
        Command::Diagram(a) => {
            let g = &mut cfg.grid;
            g.r = a.r.unwrap_or(g.r);
            g.l_range = (a.lmin.unwrap_or(g.l_range.0), a.lmax.unwrap_or(g.l_range.1));
            g.m_range = (a.mmin.unwrap_or(g.m_range.0), a.mmax.unwrap_or(g.m_range.1));
            g.resolution = a.res.unwrap_or(g.resolution);
            cfg.output.format = a.format.unwrap_or(cfg.output.format);
            if a.out.is_some() {
                cfg.output.path = a.out;
            }
            cfg.validate()?;
            let grid = diagram_grid(cfg.grid.r, cfg.grid.l_range, cfg.grid.m_range, cfg.grid.resolution)?;
            emit(&render(&grid, cfg.output.format)?, cfg.output.path.as_ref(), out)?;
        }
        Command::Helicoid(a) => {
            let geometry = helicoid_geometry(a.alpha, a.m, a.l)?;
            let t = tau3_helicoid(a.alpha, a.m, a.l)?;
            let o = HelicoidOutput {
                t: [geometry.t1, geometry.t2, geometry.t3],
                corrected_t: t.corrected_t,
                tau3_printed: t.display,
                tau3_definition: t.assembled,
                geometry,
            };
            emit(&json(&o)?, None, out)?;
        }
    }
    Ok(Outcome::Done)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::VerificationFailed) => EXIT_VERIFY,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidArgument(_) => EXIT_USAGE,
                _ => EXIT_DOMAIN,
            }
        }
    }
}

/// [`run`] on the process streams.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}
