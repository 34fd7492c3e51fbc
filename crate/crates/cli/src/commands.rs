//! One function per subcommand. Commands compute everything first and only
//! then hand the finished artifacts back, so a failure never leaves a
//! partial file behind.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use flyover::constants::{ev_to_joule, HBAR};
use flyover::spectral::{spectral_reduced_exact_with, spectral_reduced_saddle_with, SpectralPoint};
use flyover::{
    aligned_screen_grid, consistency_audit, extracted_mu_with, fringe_map, gamma_geometry_with,
    inverse_decoherence_length_with, lindhard_argument, mu_asymptotic, mu_asymptotic_first_order,
    mu_material_with, LossModel, MetalParameters,
};

use crate::config::{parse_energy_list, RunConfig, SweepSpec};
use crate::CliError;

/// Finished artifacts of one command: files to write and text for stdout.
#[derive(Default)]
pub struct Outcome {
    pub files: Vec<(PathBuf, Vec<u8>)>,
    pub stdout: String,
}

fn csv_cell(v: f64) -> String {
    format!("{v:.16e}")
}

/// `gamma`: the geometry-function curve (one row per x).
pub fn gamma(
    cfg: &RunConfig,
    x_min: f64,
    x_max: f64,
    count: usize,
    out: &Path,
) -> Result<Outcome, CliError> {
    if count < 2 || !(x_min < x_max) || !(x_min >= 0.0) {
        return Err(CliError::Config(format!(
            "gamma grid needs 0 <= x_min < x_max and count >= 2, got {x_min}:{x_max}:{count}"
        )));
    }
    let tol = cfg.tolerances();
    let grid = SweepSpec {
        start: x_min,
        stop: x_max,
        count,
    }
    .values();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&x| gamma_geometry_with(x, tol).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    let mut text = String::from("x,gamma\n");
    for (x, g) in grid.iter().zip(&values) {
        let _ = writeln!(text, "{},{}", csv_cell(*x), csv_cell(*g));
    }
    Ok(Outcome {
        files: vec![(out.to_path_buf(), text.into_bytes())],
        stdout: format!("wrote {} rows to {}\n", grid.len(), out.display()),
    })
}

/// `mu`: material-function curve with both asymptotic orders, plus the
/// per-metal Lindhard and Hubbard values.
pub fn mu(
    cfg: &RunConfig,
    table: &[MetalParameters],
    x_max: f64,
    count: usize,
    out: &Path,
    points_out: &Path,
) -> Result<Outcome, CliError> {
    if count < 2 || !(x_max > 0.0) {
        return Err(CliError::Config(format!(
            "mu grid needs x_max > 0 and count >= 2, got {x_max}:{count}"
        )));
    }
    let tol = cfg.tolerances();
    let grid = SweepSpec {
        start: 0.0,
        stop: x_max,
        count,
    }
    .values();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&x| mu_material_with(x, tol).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    let mut curve = String::from("x,mu,mu_first_order,mu_second_order\n");
    for (x, m) in grid.iter().zip(&values) {
        let _ = writeln!(
            curve,
            "{},{},{},{}",
            csv_cell(*x),
            csv_cell(*m),
            csv_cell(mu_asymptotic_first_order(*x)),
            csv_cell(mu_asymptotic(*x))
        );
    }

    let mut points = String::from("name,x,mu_lindhard,mu_hubbard\n");
    for metal in table {
        let x = lindhard_argument(metal);
        let lindhard = mu_material_with(x, tol)?;
        let probe = 1e-5 * metal.fermi_energy() / HBAR;
        let hubbard = extracted_mu_with(probe, metal, LossModel::Hubbard, tol)?;
        let _ = writeln!(
            points,
            "{},{},{},{}",
            metal.name,
            csv_cell(x),
            csv_cell(lindhard),
            csv_cell(hubbard)
        );
    }
    Ok(Outcome {
        files: vec![
            (out.to_path_buf(), curve.into_bytes()),
            (points_out.to_path_buf(), points.into_bytes()),
        ],
        stdout: format!(
            "wrote {} curve rows to {} and {} metals to {}\n",
            grid.len(),
            out.display(),
            table.len(),
            points_out.display()
        ),
    })
}

/// `lambda`: inverse decoherence length against D/z0, one column per beam
/// energy.
pub fn lambda(
    cfg: &RunConfig,
    metal: &MetalParameters,
    d_over_z0: &str,
    energies: &str,
    out: &Path,
) -> Result<Outcome, CliError> {
    let sweep = SweepSpec::parse(d_over_z0)?;
    let ratios = sweep.values();
    let energy_list = parse_energy_list(energies)?;
    let tol = cfg.tolerances();

    let mut header = String::from("d_over_z0");
    for (label, _) in &energy_list {
        let _ = write!(header, ",lambda_inv_{label}");
    }
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (_, ev) in &energy_list {
        let column: Vec<f64> = ratios
            .par_iter()
            .map(|&ratio| -> Result<f64, CliError> {
                let setup = flyover::ExperimentSetup::builder()
                    .kinetic_energy(ev_to_joule(*ev))
                    .path_separation(ratio * cfg.height_um * 1e-6)
                    .height(cfg.height_um * 1e-6)
                    .plate_length(cfg.plate_cm * 1e-2)
                    .temperature(cfg.temperature_k)
                    .screen_distance(cfg.screen_m)
                    .build()
                    .map_err(|e| CliError::Config(e.to_string()))?;
                let b = inverse_decoherence_length_with(&setup, metal, cfg.model, tol)?;
                Ok(b.inverse_length)
            })
            .collect::<Result<_, _>>()?;
        columns.push(column);
    }
    let mut text = header;
    text.push('\n');
    for (row, ratio) in ratios.iter().enumerate() {
        let mut line = csv_cell(*ratio);
        for column in &columns {
            let _ = write!(line, ",{}", csv_cell(column[row]));
        }
        text.push_str(&line);
        text.push('\n');
    }
    Ok(Outcome {
        files: vec![(out.to_path_buf(), text.into_bytes())],
        stdout: format!(
            "wrote {}x{} rate grid to {}\n",
            energy_list.len(),
            ratios.len(),
            out.display()
        ),
    })
}

/// `visibility`: fringe visibility against height, one column per beam
/// energy.
pub fn visibility(
    cfg: &RunConfig,
    metal: &MetalParameters,
    z0_um: &str,
    energies: &str,
    out: &Path,
) -> Result<Outcome, CliError> {
    let sweep = SweepSpec::parse(z0_um)?;
    let heights = sweep.values();
    let energy_list = parse_energy_list(energies)?;
    let tol = cfg.tolerances();

    let mut header = String::from("z0_m");
    for (label, _) in &energy_list {
        let _ = write!(header, ",visibility_{label}");
    }
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (_, ev) in &energy_list {
        let column: Vec<f64> = heights
            .par_iter()
            .map(|&z0_um| -> Result<f64, CliError> {
                let setup = flyover::ExperimentSetup::builder()
                    .kinetic_energy(ev_to_joule(*ev))
                    .path_separation(cfg.separation_um * 1e-6)
                    .height(z0_um * 1e-6)
                    .plate_length(cfg.plate_cm * 1e-2)
                    .temperature(cfg.temperature_k)
                    .screen_distance(cfg.screen_m)
                    .build()
                    .map_err(|e| CliError::Config(e.to_string()))?;
                let b = inverse_decoherence_length_with(&setup, metal, cfg.model, tol)?;
                Ok(b.visibility)
            })
            .collect::<Result<_, _>>()?;
        columns.push(column);
    }
    let mut text = header;
    text.push('\n');
    for (row, z0) in heights.iter().enumerate() {
        let mut line = csv_cell(z0 * 1e-6);
        for column in &columns {
            let _ = write!(line, ",{}", csv_cell(column[row]));
        }
        text.push_str(&line);
        text.push('\n');
    }
    Ok(Outcome {
        files: vec![(out.to_path_buf(), text.into_bytes())],
        stdout: format!(
            "wrote {}x{} visibility grid to {}\n",
            energy_list.len(),
            heights.len(),
            out.display()
        ),
    })
}

/// `fringes`: interference map over (height, screen position), exported as a
/// CSV matrix and a PGM image.
#[allow(clippy::too_many_arguments)]
pub fn fringes(
    cfg: &RunConfig,
    metal: &MetalParameters,
    z0_um: &str,
    fringe_count: u32,
    samples_per_fringe: u32,
    out: &Path,
    pgm_out: &Path,
) -> Result<Outcome, CliError> {
    if fringe_count == 0 || samples_per_fringe == 0 {
        return Err(CliError::Config(
            "fringe map needs positive fringe and sample counts".to_string(),
        ));
    }
    if !samples_per_fringe.is_multiple_of(2) {
        return Err(CliError::Config(
            "samples per fringe must be even so the grid hits minima exactly".to_string(),
        ));
    }
    let setup = cfg.setup()?;
    let heights: Vec<f64> = SweepSpec::parse(z0_um)?
        .values()
        .into_iter()
        .map(|um| um * 1e-6)
        .collect();
    let screen =
        aligned_screen_grid(&setup, fringe_count, samples_per_fringe).map_err(CliError::from)?;
    let map = fringe_map(&heights, &screen, &setup, metal, cfg.model)?;
    let mut csv = Vec::new();
    map.write_csv(&mut csv).map_err(CliError::Io)?;
    let mut pgm = Vec::new();
    map.write_pgm(&mut pgm).map_err(CliError::Io)?;
    Ok(Outcome {
        files: vec![(out.to_path_buf(), csv), (pgm_out.to_path_buf(), pgm)],
        stdout: format!(
            "wrote {}x{} fringe map to {} and {}\n",
            heights.len(),
            screen.len(),
            out.display(),
            pgm_out.display()
        ),
    })
}

/// `spectral`: reduced spectral function on a scaled (q z0, omega z0/v)
/// grid, long CSV format.
pub fn spectral(
    cfg: &RunConfig,
    q_spec: &str,
    omega_spec: &str,
    method: &str,
    out: &Path,
) -> Result<Outcome, CliError> {
    let setup = cfg.setup()?;
    let tol = cfg.tolerances();
    let q_grid = SweepSpec::parse(q_spec)?.values();
    let omega_grid = SweepSpec::parse(omega_spec)?.values();
    let exact = match method {
        "saddle" => false,
        "exact" => true,
        other => {
            return Err(CliError::Config(format!(
                "unknown spectral method '{other}' (expected saddle or exact)"
            )))
        }
    };
    let z0 = setup.height;
    let v = setup.velocity;
    let grid: Vec<(f64, f64)> = q_grid
        .iter()
        .flat_map(|&q| omega_grid.iter().map(move |&w| (q, w)))
        .collect();
    let samples: Vec<SpectralPoint> = grid
        .par_iter()
        .map(|&(q_scaled, w_scaled)| -> Result<SpectralPoint, CliError> {
            let q = q_scaled / z0;
            let omega = w_scaled * v / z0;
            let value = if exact {
                spectral_reduced_exact_with(q, omega, &setup, tol)?
            } else {
                spectral_reduced_saddle_with(q, omega, &setup, tol)?
            };
            Ok(SpectralPoint { q, omega, value })
        })
        .collect::<Result<_, _>>()?;
    let mut text = String::from("q_over_inv_z0,omega_over_v_z0,S\n");
    for (&(q_scaled, w_scaled), point) in grid.iter().zip(&samples) {
        let _ = writeln!(
            text,
            "{},{},{}",
            csv_cell(q_scaled),
            csv_cell(w_scaled),
            csv_cell(point.value)
        );
    }
    Ok(Outcome {
        files: vec![(out.to_path_buf(), text.into_bytes())],
        stdout: format!(
            "wrote {} spectral samples to {}\n",
            samples.len(),
            out.display()
        ),
    })
}

/// `audit`: the JSON cross-formula consistency report.
pub fn audit(cfg: &RunConfig, metal: &MetalParameters, out: &Path) -> Result<Outcome, CliError> {
    let setup = cfg.setup()?;
    let report = consistency_audit(&setup, metal)?;
    let mut bytes = serde_json::to_vec_pretty(&report)
        .map_err(|e| CliError::Config(format!("cannot serialize audit report: {e}")))?;
    bytes.push(b'\n');
    Ok(Outcome {
        files: vec![(out.to_path_buf(), bytes)],
        stdout: format!(
            "canonical 1/lambda = {:.6e} 1/m, report written to {}\n",
            report.route_values.canonical,
            out.display()
        ),
    })
}

/// `materials`: list the table; optionally re-emit it as CSV.
pub fn materials(table: &[MetalParameters], out: Option<&Path>) -> Result<Outcome, CliError> {
    let mut stdout = String::new();
    for metal in table {
        let _ = writeln!(stdout, "{metal}, x = {:.4}", lindhard_argument(metal));
    }
    let mut files = Vec::new();
    if let Some(path) = out {
        let mut text = String::from("name,k_F,k_TF,epsilon_i\n");
        for metal in table {
            let _ = writeln!(
                text,
                "{},{},{},{}",
                metal.name,
                csv_cell(metal.fermi_wave_vector),
                csv_cell(metal.thomas_fermi_wave_vector),
                csv_cell(metal.ion_dielectric_constant)
            );
        }
        files.push((path.to_path_buf(), text.into_bytes()));
    }
    Ok(Outcome { files, stdout })
}
