//! Plate materials: Fermi-surface parameters, lattice screening, and the
//! bundled free-electron table.

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::Path;

use crate::constants::{self, PhysicalConstants};

/// Lattice ion data, used to derive the ion plasma frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IonData {
    /// Ion charge number Z.
    pub charge_number: f64,
    /// Ion mass (kg).
    pub mass: f64,
    /// Ion density (1/m^3).
    pub density: f64,
}

/// Free-electron parameters of one plate material.
#[derive(Clone, Debug, PartialEq)]
pub struct MetalParameters {
    pub name: String,
    /// Fermi wave vector k_F (1/m).
    pub fermi_wave_vector: f64,
    /// Thomas-Fermi screening wave vector k_TF (1/m).
    pub thomas_fermi_wave_vector: f64,
    /// Static ion (lattice) dielectric constant.
    pub ion_dielectric_constant: f64,
    /// Optional lattice ion data.
    pub ion_data: Option<IonData>,
}

#[derive(Debug, thiserror::Error)]
pub enum MaterialError {
    #[error("{name}: Fermi wave vector must be positive, got {value:e}")]
    InvalidFermiWaveVector { name: String, value: f64 },
    #[error("{name}: Thomas-Fermi wave vector must be positive, got {value:e}")]
    InvalidThomasFermiWaveVector { name: String, value: f64 },
    #[error("{name}: ion dielectric constant must be >= 1, got {value}")]
    InvalidIonDielectric { name: String, value: f64 },
    #[error("{name}: neither an ion dielectric constant nor ion data configured")]
    MissingIonScreening { name: String },
    #[error("material table line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate material name '{name}' in table")]
    DuplicateName { name: String },
    #[error("material '{name}' not found in table")]
    UnknownMaterial { name: String },
    #[error("cannot read material table: {0}")]
    Io(#[from] std::io::Error),
}

/// Lattice screening constant suggested by the short-wavelength phonon
/// estimate; used when a material does not override it.
pub const DEFAULT_ION_DIELECTRIC: f64 = 2.0;

impl MetalParameters {
    /// New material with the default lattice screening constant.
    pub fn new(
        name: impl Into<String>,
        fermi_wave_vector: f64,
        thomas_fermi_wave_vector: f64,
    ) -> Result<Self, MaterialError> {
        Self::from_parts(
            name,
            fermi_wave_vector,
            thomas_fermi_wave_vector,
            Some(DEFAULT_ION_DIELECTRIC),
            None,
        )
    }

    /// Full constructor. The ion dielectric constant may be omitted only if
    /// ion data is supplied, in which case the short-wavelength estimate
    /// (exactly 2) is stored.
    pub fn from_parts(
        name: impl Into<String>,
        fermi_wave_vector: f64,
        thomas_fermi_wave_vector: f64,
        ion_dielectric_constant: Option<f64>,
        ion_data: Option<IonData>,
    ) -> Result<Self, MaterialError> {
        let name = name.into();
        if !(fermi_wave_vector > 0.0) || !fermi_wave_vector.is_finite() {
            return Err(MaterialError::InvalidFermiWaveVector {
                name,
                value: fermi_wave_vector,
            });
        }
        if !(thomas_fermi_wave_vector > 0.0) || !thomas_fermi_wave_vector.is_finite() {
            return Err(MaterialError::InvalidThomasFermiWaveVector {
                name,
                value: thomas_fermi_wave_vector,
            });
        }
        let ion_dielectric_constant = match (ion_dielectric_constant, ion_data) {
            (Some(e), _) => {
                if !(e >= 1.0) || !e.is_finite() {
                    return Err(MaterialError::InvalidIonDielectric { name, value: e });
                }
                e
            }
            (None, Some(ion)) => ion_screening_from_phonons(&ion).epsilon_i,
            (None, None) => return Err(MaterialError::MissingIonScreening { name }),
        };
        Ok(MetalParameters {
            name,
            fermi_wave_vector,
            thomas_fermi_wave_vector,
            ion_dielectric_constant,
            ion_data,
        })
    }

    pub fn with_ion_dielectric(mut self, epsilon_i: f64) -> Result<Self, MaterialError> {
        if !(epsilon_i >= 1.0) || !epsilon_i.is_finite() {
            return Err(MaterialError::InvalidIonDielectric {
                name: self.name,
                value: epsilon_i,
            });
        }
        self.ion_dielectric_constant = epsilon_i;
        Ok(self)
    }

    pub fn with_ion_data(mut self, ion: IonData) -> Self {
        self.ion_data = Some(ion);
        self
    }

    /// Fermi velocity hbar k_F / m (m/s).
    pub fn fermi_velocity(&self) -> f64 {
        constants::HBAR * self.fermi_wave_vector / constants::ELECTRON_MASS
    }

    /// Fermi energy hbar^2 k_F^2 / (2 m) (J).
    pub fn fermi_energy(&self) -> f64 {
        let p = constants::HBAR * self.fermi_wave_vector;
        p * p / (2.0 * constants::ELECTRON_MASS)
    }
}

/// Ion-screening summary: the stored constant plus, when ion data is
/// available, the ion plasma frequency and the short-wavelength check value
/// `1 + omega_pi^2 / omega(k_D)^2` with `omega(k_D)` replaced by `omega_pi`
/// (which makes the check exactly 2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IonScreening {
    pub epsilon_i: f64,
    pub ion_plasma_frequency: Option<f64>,
    pub short_wavelength_check: Option<f64>,
}

fn ion_screening_from_phonons(ion: &IonData) -> IonScreening {
    let c = PhysicalConstants::CODATA_2018;
    let omega_pi = ion.charge_number
        * c.elementary_charge
        * (ion.density / (c.vacuum_permittivity * ion.mass)).sqrt();
    // 1 + omega_pi^2 / omega(k_D)^2 with the short-wavelength replacement
    // omega(k_D) -> omega_pi, which makes the estimate exactly 2
    let omega_debye = omega_pi;
    let check = 1.0 + (omega_pi / omega_debye).powi(2);
    IonScreening {
        epsilon_i: check,
        ion_plasma_frequency: Some(omega_pi),
        short_wavelength_check: Some(check),
    }
}

/// Lattice screening constant of a material, with the phonon-derived check
/// value when ion data is present.
pub fn ion_screening_constant(metal: &MetalParameters) -> IonScreening {
    match metal.ion_data {
        Some(ion) => IonScreening {
            epsilon_i: metal.ion_dielectric_constant,
            ..ion_screening_from_phonons(&ion)
        },
        None => IonScreening {
            epsilon_i: metal.ion_dielectric_constant,
            ion_plasma_frequency: None,
            short_wavelength_check: None,
        },
    }
}

/// The dimensionless screening argument
/// `x = m e^2 / (2 pi eps0 eps_i hbar^2 k_F) = 2 / (eps_i a0 k_F)`
/// that carries all material dependence of the dephasing rate.
pub fn lindhard_argument(metal: &MetalParameters) -> f64 {
    let c = PhysicalConstants::CODATA_2018;
    c.electron_mass * c.elementary_charge.powi(2)
        / (2.0
            * std::f64::consts::PI
            * c.vacuum_permittivity
            * metal.ion_dielectric_constant
            * c.reduced_planck.powi(2)
            * metal.fermi_wave_vector)
}

/// Non-relativistic electron speed for a kinetic energy in joules.
pub fn electron_velocity(kinetic_energy: f64) -> Result<f64, SetupError> {
    if !(kinetic_energy > 0.0) || !kinetic_energy.is_finite() {
        return Err(SetupError::NonPositiveEnergy {
            value: kinetic_energy,
        });
    }
    Ok((2.0 * kinetic_energy / constants::ELECTRON_MASS).sqrt())
}

/// Kinetic energy of an electron moving at `velocity` (J).
pub fn electron_kinetic_energy(velocity: f64) -> f64 {
    0.5 * constants::ELECTRON_MASS * velocity * velocity
}

pub use crate::setup::SetupError;

const BUNDLED_TABLE: &str = include_str!("../data/materials.csv");

/// Parse a material table in the `name,k_F,k_TF,epsilon_i` CSV schema.
/// Lines starting with `#` are comments.
pub fn parse_material_table(text: &str) -> Result<Vec<MetalParameters>, MaterialError> {
    let mut out: Vec<MetalParameters> = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields != ["name", "k_F", "k_TF", "epsilon_i"] {
                return Err(MaterialError::Parse {
                    line: line_no,
                    message: format!("expected header 'name,k_F,k_TF,epsilon_i', got '{line}'"),
                });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(MaterialError::Parse {
                line: line_no,
                message: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let name = fields[0].to_string();
        if name.is_empty() {
            return Err(MaterialError::Parse {
                line: line_no,
                message: "empty material name".into(),
            });
        }
        let parse_num = |s: &str, what: &str| -> Result<f64, MaterialError> {
            s.parse::<f64>().map_err(|e| MaterialError::Parse {
                line: line_no,
                message: format!("bad {what} '{s}': {e}"),
            })
        };
        let k_f = parse_num(fields[1], "k_F")?;
        let k_tf = parse_num(fields[2], "k_TF")?;
        let eps_i = parse_num(fields[3], "epsilon_i")?;
        if out.iter().any(|m| m.name == name) {
            return Err(MaterialError::DuplicateName { name });
        }
        out.push(MetalParameters::from_parts(
            name,
            k_f,
            k_tf,
            Some(eps_i),
            None,
        )?);
    }
    if !saw_header {
        return Err(MaterialError::Parse {
            line: 1,
            message: "empty table: header 'name,k_F,k_TF,epsilon_i' not found".into(),
        });
    }
    Ok(out)
}

/// Load a material table from a CSV file.
pub fn load_material_table(path: impl AsRef<Path>) -> Result<Vec<MetalParameters>, MaterialError> {
    let mut text = String::new();
    fs::File::open(path)?.read_to_string(&mut text)?;
    parse_material_table(&text)
}

/// The bundled free-electron table (Au, Ag, Cu, Al, Na).
pub fn bundled_materials() -> Vec<MetalParameters> {
    parse_material_table(BUNDLED_TABLE).expect("bundled table is valid")
}

/// Look up one material by name in a table.
pub fn find_material<'a>(
    table: &'a [MetalParameters],
    name: &str,
) -> Result<&'a MetalParameters, MaterialError> {
    table
        .iter()
        .find(|m| m.name == name)
        .ok_or_else(|| MaterialError::UnknownMaterial { name: name.into() })
}

impl fmt::Display for MetalParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: k_F = {:.4e} 1/m, k_TF = {:.4e} 1/m, eps_i = {}",
            self.name,
            self.fermi_wave_vector,
            self.thomas_fermi_wave_vector,
            self.ion_dielectric_constant
        )
    }
}
