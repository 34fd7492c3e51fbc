//! Command-line front end: figure-data regeneration, parameter sweeps, and
//! the consistency audit. Exit codes: 0 success, 2 configuration error,
//! 3 quadrature convergence failure.

// `!(x > 0.0)` guards reject NaN; `x <= 0.0` would not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_model, RunConfig};
use flyover::quadrature::QuadratureError;
use flyover::{DephasingError, InterferenceError, SpectralError};

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or inputs; exit code 2.
    Config(String),
    /// A quadrature failed to converge or hit non-finite values; exit 3.
    Convergence(String),
    /// Filesystem trouble; exit code 1.
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Convergence(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<QuadratureError> for CliError {
    fn from(e: QuadratureError) -> Self {
        match e {
            QuadratureError::ToleranceNotReached { .. } | QuadratureError::NonFinite { .. } => {
                CliError::Convergence(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Quadrature(q) => q.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<DephasingError> for CliError {
    fn from(e: DephasingError) -> Self {
        match e {
            DephasingError::Quadrature(q) => q.into(),
            DephasingError::Dielectric(flyover::DielectricError::Quadrature(q)) => q.into(),
            DephasingError::Spectral(s) => s.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<InterferenceError> for CliError {
    fn from(e: InterferenceError) -> Self {
        match e {
            InterferenceError::Dephasing(d) => d.into(),
            InterferenceError::Io(io) => CliError::Io(io),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "flyover",
    version,
    about = "Which-path dephasing of an electron flying over a metallic plate"
)]
struct Cli {
    /// Line-oriented `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Material table CSV (overrides $FLYOVER_MATERIALS and the bundled set).
    #[arg(long, global = true)]
    materials: Option<PathBuf>,

    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    show_config: bool,

    /// Plate material name from the table.
    #[arg(long, global = true)]
    metal: Option<String>,

    /// Loss model: lindhard or hubbard.
    #[arg(long, global = true)]
    model: Option<String>,

    /// Beam kinetic energy (eV).
    #[arg(long, global = true)]
    energy_ev: Option<f64>,

    /// Path separation D (um).
    #[arg(long, global = true)]
    separation_um: Option<f64>,

    /// Height z0 above the plate (um).
    #[arg(long, global = true)]
    height_um: Option<f64>,

    /// Plate length L (cm).
    #[arg(long, global = true)]
    plate_cm: Option<f64>,

    /// Plate temperature (K).
    #[arg(long, global = true)]
    temperature_k: Option<f64>,

    /// Screen distance (m).
    #[arg(long, global = true)]
    screen_m: Option<f64>,

    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry-function curve gamma(x).
    Gamma {
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        #[arg(long, default_value_t = 4.0)]
        x_max: f64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value = "gamma.csv")]
        out: PathBuf,
    },
    /// Material-function curve mu(x) with asymptotes plus per-metal points.
    Mu {
        #[arg(long, default_value_t = 4.0)]
        x_max: f64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value = "mu_curve.csv")]
        out: PathBuf,
        #[arg(long, default_value = "mu_metals.csv")]
        points_out: PathBuf,
    },
    /// Inverse decoherence length vs D/z0 for a set of beam energies.
    Lambda {
        /// Sweep of the separation-to-height ratio, start:stop:count.
        #[arg(long, default_value = "0.02:0.3:100")]
        d_over_z0: String,
        /// Comma-separated energies, e.g. 150eV,1keV,3keV.
        #[arg(long, default_value = "150eV,1keV,3keV")]
        energies: String,
        #[arg(long, default_value = "lambda.csv")]
        out: PathBuf,
    },
    /// Fringe visibility vs height for a set of beam energies.
    Visibility {
        /// Height sweep in micrometers, start:stop:count.
        #[arg(long, default_value = "30:1000:200")]
        z0_um: String,
        #[arg(long, default_value = "150eV,1keV,3keV")]
        energies: String,
        #[arg(long, default_value = "visibility.csv")]
        out: PathBuf,
    },
    /// Fringe map over height and screen position (CSV matrix + PGM image).
    Fringes {
        /// Height sweep in micrometers, start:stop:count.
        #[arg(long, default_value = "50:1000:120")]
        z0_um: String,
        /// Fringe spacings covered on each side of the axis.
        #[arg(long, default_value_t = 3)]
        fringe_count: u32,
        /// Grid points per fringe spacing (even, so extrema are sampled).
        #[arg(long, default_value_t = 40)]
        samples_per_fringe: u32,
        #[arg(long, default_value = "fringes.csv")]
        out: PathBuf,
        #[arg(long, default_value = "fringes.pgm")]
        pgm_out: PathBuf,
    },
    /// Reduced spectral function on a scaled (q z0, omega z0/v) grid.
    Spectral {
        /// q sweep in units of 1/z0, start:stop:count.
        #[arg(long, default_value = "0.5:100:80")]
        q: String,
        /// omega sweep in units of v/z0, start:stop:count.
        #[arg(long, default_value = "0.1:3:30")]
        omega: String,
        /// Evaluation route: saddle or exact.
        #[arg(long, default_value = "saddle")]
        method: String,
        #[arg(long, default_value = "spectral.csv")]
        out: PathBuf,
    },
    /// Cross-formula consistency audit (JSON report).
    Audit {
        #[arg(long, default_value = "audit.json")]
        out: PathBuf,
    },
    /// List the material table.
    Materials {
        /// Optionally re-emit the table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_file(&text, path)?;
    }
    if let Some(m) = &cli.metal {
        cfg.metal = m.clone();
    }
    if let Some(m) = &cli.model {
        cfg.model = parse_model(m)?;
    }
    if let Some(v) = cli.energy_ev {
        cfg.energy_ev = v;
    }
    if let Some(v) = cli.separation_um {
        cfg.separation_um = v;
    }
    if let Some(v) = cli.height_um {
        cfg.height_um = v;
    }
    if let Some(v) = cli.plate_cm {
        cfg.plate_cm = v;
    }
    if let Some(v) = cli.temperature_k {
        cfg.temperature_k = v;
    }
    if let Some(v) = cli.screen_m {
        cfg.screen_m = v;
    }
    if let Some(v) = cli.rel_tol {
        cfg.rel_tol = v;
    }
    if let Some(v) = cli.abs_tol {
        cfg.abs_tol = v;
    }
    if !(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) {
        return Err(CliError::Config(format!(
            "tolerances must be positive (rel {:e}, abs {:e})",
            cfg.rel_tol, cfg.abs_tol
        )));
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = effective_config(&cli)?;
    if cli.show_config {
        print!("{}", cfg.render());
        return Ok(());
    }
    let command = cli
        .command
        .as_ref()
        .ok_or_else(|| CliError::Config("no command given (see --help)".to_string()))?;

    let table = cfg.material_table(cli.materials.as_deref())?;
    let outcome = match command {
        Command::Gamma {
            x_min,
            x_max,
            count,
            out,
        } => commands::gamma(&cfg, *x_min, *x_max, *count, out)?,
        Command::Mu {
            x_max,
            count,
            out,
            points_out,
        } => commands::mu(&cfg, &table, *x_max, *count, out, points_out)?,
        Command::Lambda {
            d_over_z0,
            energies,
            out,
        } => commands::lambda(&cfg, cfg.metal(&table)?, d_over_z0, energies, out)?,
        Command::Visibility {
            z0_um,
            energies,
            out,
        } => commands::visibility(&cfg, cfg.metal(&table)?, z0_um, energies, out)?,
        Command::Fringes {
            z0_um,
            fringe_count,
            samples_per_fringe,
            out,
            pgm_out,
        } => commands::fringes(
            &cfg,
            cfg.metal(&table)?,
            z0_um,
            *fringe_count,
            *samples_per_fringe,
            out,
            pgm_out,
        )?,
        Command::Spectral {
            q,
            omega,
            method,
            out,
        } => commands::spectral(&cfg, q, omega, method, out)?,
        Command::Audit { out } => commands::audit(&cfg, cfg.metal(&table)?, out)?,
        Command::Materials { out } => commands::materials(&table, out.as_deref())?,
    };

    // nothing is written until every value has been computed
    for (path, bytes) in &outcome.files {
        fs::write(path, bytes).map_err(CliError::Io)?;
    }
    print!("{}", outcome.stdout);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
