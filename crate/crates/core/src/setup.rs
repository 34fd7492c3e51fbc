//! Flight geometry, beam energy and thermal environment of one experiment.

use crate::constants::ELECTRON_MASS;
use crate::materials::{electron_velocity, MetalParameters};

/// Geometry and beam parameters of a single flight over the plate.
/// All lengths in meters, velocity in m/s, temperature in kelvin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentSetup {
    /// Electron speed v.
    pub velocity: f64,
    /// Wave-packet width along the flight direction.
    pub packet_width_x: f64,
    /// Wave-packet width along the path-separation direction.
    pub packet_width_y: f64,
    /// Wave-packet width normal to the plate.
    pub packet_width_z: f64,
    /// Path separation D.
    pub path_separation: f64,
    /// Height z0 of the paths above the plate.
    pub height: f64,
    /// Plate length L.
    pub plate_length: f64,
    /// Plate temperature T.
    pub temperature: f64,
    /// Distance from the plate to the detection screen (fringe rendering
    /// only).
    pub screen_distance: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum SetupError {
    #[error("kinetic energy must be positive, got {value:e} J")]
    NonPositiveEnergy { value: f64 },
    #[error("{field} must be positive, got {value:e}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("packet width {field} must be non-negative, got {value:e}")]
    NegativeWidth { field: &'static str, value: f64 },
    #[error("packet width l_z = {l_z:e} m must stay below the height z0 = {z0:e} m")]
    PacketTallerThanHeight { l_z: f64, z0: f64 },
}

/// Builder with the nominal defaults of the proposed experiment: 150 eV
/// beam, D = 10 um, z0 = 100 um, L = 1 cm, room temperature, packet widths
/// 0.01 z0, screen at 1 m.
#[derive(Clone, Copy, Debug)]
pub struct SetupBuilder {
    velocity: Option<f64>,
    kinetic_energy: Option<f64>,
    packet_widths: Option<(f64, f64, f64)>,
    path_separation: f64,
    height: f64,
    plate_length: f64,
    temperature: f64,
    screen_distance: f64,
}

impl Default for SetupBuilder {
    fn default() -> Self {
        SetupBuilder {
            velocity: None,
            kinetic_energy: None,
            packet_widths: None,
            path_separation: 10e-6,
            height: 100e-6,
            plate_length: 1e-2,
            temperature: 293.0,
            screen_distance: 1.0,
        }
    }
}

impl SetupBuilder {
    pub fn velocity(mut self, v: f64) -> Self {
        self.velocity = Some(v);
        self.kinetic_energy = None;
        self
    }

    /// Beam kinetic energy in joules; converted to a speed at build time.
    pub fn kinetic_energy(mut self, e: f64) -> Self {
        self.kinetic_energy = Some(e);
        self.velocity = None;
        self
    }

    pub fn packet_widths(mut self, l_x: f64, l_y: f64, l_z: f64) -> Self {
        self.packet_widths = Some((l_x, l_y, l_z));
        self
    }

    pub fn path_separation(mut self, d: f64) -> Self {
        self.path_separation = d;
        self
    }

    pub fn height(mut self, z0: f64) -> Self {
        self.height = z0;
        self
    }

    pub fn plate_length(mut self, l: f64) -> Self {
        self.plate_length = l;
        self
    }

    pub fn temperature(mut self, t: f64) -> Self {
        self.temperature = t;
        self
    }

    pub fn screen_distance(mut self, d: f64) -> Self {
        self.screen_distance = d;
        self
    }

    pub fn build(self) -> Result<ExperimentSetup, SetupError> {
        let velocity = match (self.velocity, self.kinetic_energy) {
            (Some(v), _) => v,
            (None, Some(e)) => electron_velocity(e)?,
            (None, None) => electron_velocity(crate::constants::ev_to_joule(150.0))?,
        };
        let (l_x, l_y, l_z) = self.packet_widths.unwrap_or_else(|| {
            let l = 0.01 * self.height;
            (l, l, l)
        });
        let setup = ExperimentSetup {
            velocity,
            packet_width_x: l_x,
            packet_width_y: l_y,
            packet_width_z: l_z,
            path_separation: self.path_separation,
            height: self.height,
            plate_length: self.plate_length,
            temperature: self.temperature,
            screen_distance: self.screen_distance,
        };
        setup.validate()?;
        Ok(setup)
    }
}

impl ExperimentSetup {
    pub fn builder() -> SetupBuilder {
        SetupBuilder::default()
    }

    pub fn validate(&self) -> Result<(), SetupError> {
        let positive = [
            ("velocity", self.velocity),
            ("path separation", self.path_separation),
            ("height", self.height),
            ("plate length", self.plate_length),
            ("temperature", self.temperature),
        ];
        for (field, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(SetupError::NonPositive { field, value });
            }
        }
        let widths = [
            ("l_x", self.packet_width_x),
            ("l_y", self.packet_width_y),
            ("l_z", self.packet_width_z),
        ];
        for (field, value) in widths {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(SetupError::NegativeWidth { field, value });
            }
        }
        if self.packet_width_z >= self.height {
            return Err(SetupError::PacketTallerThanHeight {
                l_z: self.packet_width_z,
                z0: self.height,
            });
        }
        Ok(())
    }

    /// Kinetic energy m v^2 / 2 (J).
    pub fn kinetic_energy(&self) -> f64 {
        0.5 * ELECTRON_MASS * self.velocity * self.velocity
    }

    /// Separation-to-height ratio D/z0, the only geometry parameter of the
    /// dephasing rate.
    pub fn separation_ratio(&self) -> f64 {
        self.path_separation / self.height
    }

    /// True when the beam is much faster than the Fermi velocity of the
    /// plate, the regime the rate formula assumes.
    pub fn outruns_fermi_sea(&self, metal: &MetalParameters) -> bool {
        self.velocity > metal.fermi_velocity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ev_to_joule;

    #[test]
    fn defaults_match_nominal_experiment() {
        let s = ExperimentSetup::builder().build().unwrap();
        assert!((s.velocity - 7.264e6).abs() / 7.264e6 < 1e-3);
        assert_eq!(s.path_separation, 10e-6);
        assert_eq!(s.height, 100e-6);
        assert_eq!(s.plate_length, 1e-2);
        assert_eq!(s.temperature, 293.0);
        assert!((s.packet_width_z - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn energy_and_velocity_paths_agree() {
        let via_energy = ExperimentSetup::builder()
            .kinetic_energy(ev_to_joule(150.0))
            .build()
            .unwrap();
        let via_velocity = ExperimentSetup::builder()
            .velocity(via_energy.velocity)
            .build()
            .unwrap();
        assert_eq!(via_energy, via_velocity);
        let e = via_energy.kinetic_energy();
        assert!((e - ev_to_joule(150.0)).abs() / e < 1e-14);
    }

    #[test]
    fn tall_packet_is_rejected() {
        let err = ExperimentSetup::builder()
            .packet_widths(1e-6, 1e-6, 200e-6)
            .build()
            .unwrap_err();
        assert!(matches!(err, SetupError::PacketTallerThanHeight { .. }));
    }

    #[test]
    fn nonpositive_fields_are_rejected() {
        assert!(ExperimentSetup::builder().height(0.0).build().is_err());
        assert!(ExperimentSetup::builder()
            .temperature(-1.0)
            .build()
            .is_err());
        assert!(ExperimentSetup::builder()
            .path_separation(0.0)
            .build()
            .is_err());
    }
}
