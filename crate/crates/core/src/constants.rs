//! Physical constants, CODATA 2018, SI units throughout.

/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Electron mass (kg).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// The constants bundle used by every formula in this crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge e (C).
    pub elementary_charge: f64,
    /// Vacuum permittivity epsilon_0 (F/m).
    pub vacuum_permittivity: f64,
    /// Reduced Planck constant hbar (J s).
    pub reduced_planck: f64,
    /// Electron mass m (kg).
    pub electron_mass: f64,
    /// Boltzmann constant k_B (J/K).
    pub boltzmann: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        elementary_charge: ELEMENTARY_CHARGE,
        vacuum_permittivity: VACUUM_PERMITTIVITY,
        reduced_planck: HBAR,
        electron_mass: ELECTRON_MASS,
        boltzmann: BOLTZMANN,
    };

    /// Bohr radius 4 pi eps0 hbar^2 / (m e^2) (m).
    pub fn bohr_radius(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.vacuum_permittivity * self.reduced_planck.powi(2)
            / (self.electron_mass * self.elementary_charge.powi(2))
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Bohr radius computed from the constants above (m).
pub fn bohr_radius() -> f64 {
    PhysicalConstants::CODATA_2018.bohr_radius()
}

/// One electron volt in joules.
pub const ELECTRON_VOLT: f64 = ELEMENTARY_CHARGE;

/// Convert an energy in eV to joules.
pub fn ev_to_joule(ev: f64) -> f64 {
    ev * ELECTRON_VOLT
}

/// Convert an energy in joules to eV.
pub fn joule_to_ev(joule: f64) -> f64 {
    joule / ELECTRON_VOLT
}
