//! Command-line front end. [`run`] takes the arguments and output streams
//! explicitly so it can be driven from tests.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::cavity::{operating_point, CavityParams, DEFAULT_GAMMA};
use crate::fidelity::{sweep, write_csv, DEFAULT_G_RANGE, DEFAULT_KS_RANGE, DEFAULT_RESOLUTION};
use crate::hbsa::{run_hbsa, HyperBellId};
use crate::swapping::run_swaps;
use crate::tables::verify_tables;
use crate::{run_rng, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "HBSA_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "hbsa",
    version,
    about = "Simulate hyperentangled Bell-state analysis with QD-cavity QND detectors"
)]
struct Cli {
    /// Seed for all random draws
    #[arg(long, global = true, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write results to this file instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a prepared hyper-Bell state, e.g. `--state psi-,phi+`
    Identify {
        /// Polarization and spatial Bell states, comma separated
        #[arg(long)]
        state: HyperBellId,
        #[arg(long, default_value_t = 1)]
        runs: usize,
    },
    /// Re-derive both decode tables by simulation
    VerifyTables {
        #[arg(long, default_value_t = 100)]
        repetitions: usize,
    },
    /// Reflection coefficients at one cavity setting
    OperatingPoint {
        /// Coupling strength in units of kappa + kappa_s
        #[arg(long)]
        g: f64,
        /// Side leakage in units of kappa
        #[arg(long)]
        ks: f64,
        /// Dot decay rate in units of kappa
        #[arg(long, default_value_t = DEFAULT_GAMMA)]
        gamma: f64,
    },
    /// Fidelity and efficiency over a (g, kappa_s) grid, as CSV
    Sweep {
        #[arg(long, default_value_t = DEFAULT_G_RANGE.0)]
        g_min: f64,
        #[arg(long, default_value_t = DEFAULT_G_RANGE.1)]
        g_max: f64,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION.0)]
        g_steps: usize,
        #[arg(long, default_value_t = DEFAULT_KS_RANGE.0)]
        ks_min: f64,
        #[arg(long, default_value_t = DEFAULT_KS_RANGE.1)]
        ks_max: f64,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION.1)]
        ks_steps: usize,
        #[arg(long, default_value_t = DEFAULT_GAMMA)]
        gamma: f64,
    },
    /// Hyperentanglement swapping between two pairs
    Swap {
        #[arg(long, default_value_t = 1000)]
        runs: usize,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `args` (including the program name), executes the command and
/// returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };

    let mut buf = Vec::new();
    let status = execute(&cli, &mut buf);
    let written = match &cli.output {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(&buf))
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out.write_all(&buf).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    match status {
        Ok(()) => EXIT_OK,
        Err(Failure::Verification) => {
            let _ = writeln!(err, "verification failed");
            EXIT_VERIFICATION
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut Vec<u8>) -> Result<(), Failure> {
    match &cli.command {
        Command::Identify { state, runs } => {
            let mut correct = 0;
            for k in 0..*runs {
                let r = run_hbsa(*state, &mut run_rng(cli.seed, k as u64))?;
                writeln!(out, "run {}: {} -> {}", k + 1, r.record, r.identified)?;
                if r.identified == *state {
                    correct += 1;
                }
            }
            writeln!(out, "identified {correct}/{runs} as {state}")?;
            if correct != *runs {
                return Err(Failure::Verification);
            }
        }
        Command::VerifyTables { repetitions } => {
            let rows = verify_tables(cli.seed, *repetitions)?;
            for r in &rows {
                writeln!(out, "{r}")?;
            }
            let passed = rows.iter().filter(|r| r.pass).count();
            writeln!(out, "{passed}/{} table rows pass", rows.len())?;
            if passed != rows.len() {
                return Err(Failure::Verification);
            }
        }
        Command::OperatingPoint { g, ks, gamma } => {
            let p = operating_point(&CavityParams::from_total_coupling(*g, *ks, *gamma)?)?;
            writeln!(out, "g/(kappa+kappa_s) = {g}")?;
            writeln!(out, "kappa_s/kappa = {ks}")?;
            writeln!(out, "gamma/kappa = {gamma}")?;
            writeln!(out, "r0 = {:.9} {:+.9}i", p.r_cold.re, p.r_cold.im)?;
            writeln!(out, "r_h = {:.9} {:+.9}i", p.r_hot.re, p.r_hot.im)?;
            writeln!(out, "zeta = {:.9}", p.zeta)?;
            writeln!(out, "xi = {:.9}", p.xi)?;
            writeln!(out, "phi0 = {:.9}", p.phi0)?;
            writeln!(out, "phih = {:.9}", p.phih)?;
            writeln!(out, "dphi = {:.9}", p.dphi)?;
            writeln!(out, "theta_F = {:.9}", p.faraday)?;
        }
        Command::Sweep {
            g_min,
            g_max,
            g_steps,
            ks_min,
            ks_max,
            ks_steps,
            gamma,
        } => {
            let rows = sweep(
                (*g_min, *g_max),
                (*ks_min, *ks_max),
                *gamma,
                (*g_steps, *ks_steps),
            )?;
            write_csv(&rows, out)?;
        }
        Command::Swap { runs } => {
            let s = run_swaps(cli.seed, *runs)?;
            writeln!(out, "successes: {}/{}", s.successes, s.runs)?;
            if s.runs > 0 {
                writeln!(out, "min fidelity: {:.12}", s.min_fidelity)?;
            }
            let expected = s.runs as f64 / 16.0;
            let mut chi2 = 0.0;
            for id in HyperBellId::all() {
                let n = s.histogram[id.index()];
                writeln!(out, "{id:<10} {n}")?;
                if expected > 0.0 {
                    chi2 += (n as f64 - expected).powi(2) / expected;
                }
            }
            writeln!(out, "chi-square (15 dof): {chi2:.3}")?;
            if s.successes != s.runs {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}
