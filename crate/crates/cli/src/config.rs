//! Run configuration: paper-nominal defaults, a line-oriented
//! `key = value` config file, and flag overrides in that precedence order.

use std::fmt::Write as _;
use std::path::Path;

use flyover::constants::ev_to_joule;
use flyover::{ExperimentSetup, LossModel, MetalParameters, Tolerances};

use crate::CliError;

/// Effective run configuration. Lengths and energies are kept in the CLI's
/// boundary units (eV, um, cm, m) and converted to SI when the setup is
/// built.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub metal: String,
    pub model: LossModel,
    pub energy_ev: f64,
    pub separation_um: f64,
    pub height_um: f64,
    pub plate_cm: f64,
    pub temperature_k: f64,
    pub screen_m: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            metal: "Au".to_string(),
            model: LossModel::Lindhard,
            energy_ev: 150.0,
            separation_um: 10.0,
            height_um: 100.0,
            plate_cm: 1.0,
            temperature_k: 293.0,
            screen_m: 1.0,
            rel_tol: 1e-8,
            abs_tol: 1e-12,
        }
    }
}

impl RunConfig {
    /// Apply a `key = value` config file. Unknown keys are config errors;
    /// `#` starts a comment.
    pub fn apply_file(&mut self, text: &str, origin: &Path) -> Result<(), CliError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "{}:{}: expected 'key = value', got '{line}'",
                    origin.display(),
                    idx + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad_number = |e| {
                CliError::Config(format!(
                    "{}:{}: bad number for '{key}': {e}",
                    origin.display(),
                    idx + 1
                ))
            };
            match key {
                "metal" => self.metal = value.to_string(),
                "model" => self.model = parse_model(value)?,
                "energy_ev" => self.energy_ev = value.parse().map_err(bad_number)?,
                "separation_um" => self.separation_um = value.parse().map_err(bad_number)?,
                "height_um" => self.height_um = value.parse().map_err(bad_number)?,
                "plate_cm" => self.plate_cm = value.parse().map_err(bad_number)?,
                "temperature_k" => self.temperature_k = value.parse().map_err(bad_number)?,
                "screen_m" => self.screen_m = value.parse().map_err(bad_number)?,
                "rel_tol" => self.rel_tol = value.parse().map_err(bad_number)?,
                "abs_tol" => self.abs_tol = value.parse().map_err(bad_number)?,
                other => {
                    return Err(CliError::Config(format!(
                        "{}:{}: unknown config key '{other}'",
                        origin.display(),
                        idx + 1
                    )))
                }
            }
        }
        Ok(())
    }

    /// Render the effective configuration in config-file syntax.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "metal = {}", self.metal);
        let _ = writeln!(out, "model = {}", self.model);
        let _ = writeln!(out, "energy_ev = {}", self.energy_ev);
        let _ = writeln!(out, "separation_um = {}", self.separation_um);
        let _ = writeln!(out, "height_um = {}", self.height_um);
        let _ = writeln!(out, "plate_cm = {}", self.plate_cm);
        let _ = writeln!(out, "temperature_k = {}", self.temperature_k);
        let _ = writeln!(out, "screen_m = {}", self.screen_m);
        let _ = writeln!(out, "rel_tol = {:e}", self.rel_tol);
        let _ = writeln!(out, "abs_tol = {:e}", self.abs_tol);
        out
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances::new(self.rel_tol, self.abs_tol)
    }

    /// Build the SI experiment setup from the boundary-unit fields.
    pub fn setup(&self) -> Result<ExperimentSetup, CliError> {
        ExperimentSetup::builder()
            .kinetic_energy(ev_to_joule(self.energy_ev))
            .path_separation(self.separation_um * 1e-6)
            .height(self.height_um * 1e-6)
            .plate_length(self.plate_cm * 1e-2)
            .temperature(self.temperature_k)
            .screen_distance(self.screen_m)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Resolve the material table (flag > environment > bundled) and pick
    /// the configured metal.
    pub fn material_table(
        &self,
        flag_path: Option<&Path>,
    ) -> Result<Vec<MetalParameters>, CliError> {
        let env_path = std::env::var_os("FLYOVER_MATERIALS");
        let table = match (flag_path, env_path) {
            (Some(p), _) => flyover::load_material_table(p),
            (None, Some(p)) => flyover::load_material_table(Path::new(&p)),
            (None, None) => Ok(flyover::bundled_materials()),
        };
        table.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn metal<'a>(&self, table: &'a [MetalParameters]) -> Result<&'a MetalParameters, CliError> {
        flyover::find_material(table, &self.metal).map_err(|e| CliError::Config(e.to_string()))
    }
}

pub fn parse_model(s: &str) -> Result<LossModel, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "lindhard" => Ok(LossModel::Lindhard),
        "hubbard" => Ok(LossModel::Hubbard),
        other => Err(CliError::Config(format!(
            "unknown loss model '{other}' (expected lindhard or hubbard)"
        ))),
    }
}

/// `start:stop:count` sweep specification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Config(format!(
                "sweep '{s}' must be start:stop:count"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|e| CliError::Config(format!("sweep '{s}': bad start: {e}")))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|e| CliError::Config(format!("sweep '{s}': bad stop: {e}")))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|e| CliError::Config(format!("sweep '{s}': bad count: {e}")))?;
        if count < 2 {
            return Err(CliError::Config(format!(
                "sweep '{s}': count must be at least 2"
            )));
        }
        if !(start < stop) {
            return Err(CliError::Config(format!(
                "sweep '{s}': start must be below stop"
            )));
        }
        Ok(SweepSpec { start, stop, count })
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| self.start + step * k as f64)
            .collect()
    }
}

/// One beam energy given as `150eV`, `1keV` or a bare eV number.
pub fn parse_energy_ev(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    let (digits, scale) = if let Some(d) = t.strip_suffix("keV") {
        (d, 1e3)
    } else if let Some(d) = t.strip_suffix("eV") {
        (d, 1.0)
    } else {
        (t, 1.0)
    };
    let value: f64 = digits
        .trim()
        .parse()
        .map_err(|e| CliError::Config(format!("bad energy '{s}': {e}")))?;
    if !(value > 0.0) {
        return Err(CliError::Config(format!("energy '{s}' must be positive")));
    }
    Ok(value * scale)
}

/// Comma-separated energy list, e.g. `150eV,1keV,3keV`.
pub fn parse_energy_list(s: &str) -> Result<Vec<(String, f64)>, CliError> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let label: String = item
            .trim()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric() || *c == '.')
            .collect();
        out.push((label, parse_energy_ev(item)?));
    }
    if out.is_empty() {
        return Err(CliError::Config("empty energy list".to_string()));
    }
    Ok(out)
}
