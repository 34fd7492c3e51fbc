//! Electron-side observables: the reduced two-path state after the flight,
//! fringe intensity and visibility, fringe maps over a range of heights, and
//! the order-of-magnitude checks that keep the model honest.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::{BOLTZMANN, ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR, VACUUM_PERMITTIVITY};
use crate::dephasing::{inverse_decoherence_length, DephasingError};
use crate::dielectric::LossModel;
use crate::materials::MetalParameters;
use crate::setup::{ExperimentSetup, SetupError};

#[derive(Debug, thiserror::Error)]
pub enum InterferenceError {
    #[error("plate length must be non-negative, got {value:e} m")]
    NegativeLength { value: f64 },
    #[error("inverse decoherence length must be non-negative, got {value:e} 1/m")]
    NegativeRate { value: f64 },
    #[error("screen distance must be positive, got {value:e} m")]
    InvalidScreenDistance { value: f64 },
    #[error("fringe map needs at least one height and one screen position")]
    EmptyGrid,
    #[error(transparent)]
    Dephasing(#[from] DephasingError),
    #[error(transparent)]
    Setup(#[from] SetupError),
    #[error("cannot write fringe map: {0}")]
    Io(#[from] std::io::Error),
}

/// Reduced 2x2 electron state over the path basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix2 {
    entries: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    /// Eigenvalues of the Hermitian matrix, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.entries[0][0].re;
        let b = self.entries[1][1].re;
        let c = self.entries[0][1].norm();
        let mid = 0.5 * (a + b);
        let radius = (0.25 * (a - b) * (a - b) + c * c).sqrt();
        (mid - radius, mid + radius)
    }

    pub fn is_positive_semidefinite(&self, tolerance: f64) -> bool {
        self.eigenvalues().0 >= -tolerance
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        (self.entries[0][1] - self.entries[1][0].conj()).norm() <= tolerance
            && self.entries[0][0].im.abs() <= tolerance
            && self.entries[1][1].im.abs() <= tolerance
    }
}

/// State after flying length `plate_length` at dephasing rate
/// `inverse_length`, starting from the equal superposition of the two paths:
/// diagonals stay 1/2, off-diagonals shrink by `exp(-L/lambda)`.
pub fn density_matrix_after_flight(
    plate_length: f64,
    inverse_length: f64,
) -> Result<DensityMatrix2, InterferenceError> {
    if !(plate_length >= 0.0) || !plate_length.is_finite() {
        return Err(InterferenceError::NegativeLength {
            value: plate_length,
        });
    }
    if !(inverse_length >= 0.0) || !inverse_length.is_finite() {
        return Err(InterferenceError::NegativeRate {
            value: inverse_length,
        });
    }
    let off = Complex64::new(0.5 * (-plate_length * inverse_length).exp(), 0.0);
    let half = Complex64::new(0.5, 0.0);
    Ok(DensityMatrix2 {
        entries: [[half, off], [off, half]],
    })
}

/// Fringe visibility `(I_max - I_min)/(I_max + I_min) = exp(-L/lambda)`
/// for non-negative arguments.
pub fn visibility(plate_length: f64, inverse_length: f64) -> f64 {
    (-plate_length * inverse_length).exp()
}

/// Detection intensity at a point where both beams have intensity `j`:
/// `I = 2 j [1 + exp(-L/lambda) cos(delta_phi)]`.
pub fn fringe_intensity(
    phase_difference: f64,
    plate_length: f64,
    inverse_length: f64,
    beam_intensity: f64,
) -> f64 {
    2.0 * beam_intensity * (1.0 + visibility(plate_length, inverse_length) * phase_difference.cos())
}

/// Electron de Broglie wavelength `2 pi hbar / (m v)`.
pub fn de_broglie_wavelength(velocity: f64) -> f64 {
    2.0 * std::f64::consts::PI * HBAR / (ELECTRON_MASS * velocity)
}

/// Far-field two-slit phase difference at screen coordinate `x_s`:
/// `delta_phi = 2 pi D x_s / (lambda_e R)`.
pub fn two_slit_phase(x_s: f64, setup: &ExperimentSetup) -> Result<f64, InterferenceError> {
    if !(setup.screen_distance > 0.0) || !setup.screen_distance.is_finite() {
        return Err(InterferenceError::InvalidScreenDistance {
            value: setup.screen_distance,
        });
    }
    let lambda_e = de_broglie_wavelength(setup.velocity);
    Ok(2.0 * std::f64::consts::PI * setup.path_separation * x_s
        / (lambda_e * setup.screen_distance))
}

/// Distance between neighboring fringe maxima on the screen,
/// `lambda_e R / D`.
pub fn fringe_spacing(setup: &ExperimentSetup) -> Result<f64, InterferenceError> {
    if !(setup.screen_distance > 0.0) || !setup.screen_distance.is_finite() {
        return Err(InterferenceError::InvalidScreenDistance {
            value: setup.screen_distance,
        });
    }
    Ok(de_broglie_wavelength(setup.velocity) * setup.screen_distance / setup.path_separation)
}

/// Screen grid covering `fringes` spacings on each side of the axis with
/// `samples_per_fringe` points per spacing. With an even sample count the
/// grid hits every maximum and minimum exactly, which makes the row envelope
/// of a fringe map reproduce the visibility to rounding accuracy.
pub fn aligned_screen_grid(
    setup: &ExperimentSetup,
    fringes: u32,
    samples_per_fringe: u32,
) -> Result<Vec<f64>, InterferenceError> {
    let spacing = fringe_spacing(setup)?;
    let step = spacing / samples_per_fringe as f64;
    let n = (fringes * samples_per_fringe) as i64;
    Ok((-n..=n).map(|k| k as f64 * step).collect())
}

/// Fringe intensity over a (height, screen position) grid, normalized to a
/// global maximum of 1.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FringeMap {
    /// Heights z0 (m), one per row.
    pub heights: Vec<f64>,
    /// Screen coordinates x_s (m), one per column.
    pub screen_positions: Vec<f64>,
    /// Normalized intensities, `intensity[row][column]`.
    pub intensity: Vec<Vec<f64>>,
    /// Visibility `exp(-L/lambda(z0))` per row.
    pub row_visibility: Vec<f64>,
}

impl FringeMap {
    /// `(max - min)/(max + min)` of one row of the map.
    pub fn row_envelope(&self, row: usize) -> f64 {
        let r = &self.intensity[row];
        let max = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = r.iter().cloned().fold(f64::INFINITY, f64::min);
        (max - min) / (max + min)
    }

    /// CSV matrix: header row of screen coordinates, first column of
    /// heights, full double precision.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "z0_m")?;
        for x in &self.screen_positions {
            write!(out, ",{x:.16e}")?;
        }
        writeln!(out)?;
        for (row, z0) in self.heights.iter().enumerate() {
            write!(out, "{z0:.16e}")?;
            for v in &self.intensity[row] {
                write!(out, ",{v:.16e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Plain-text grayscale PGM (P2, max value 255), one pixel per grid
    /// point, brightest at the global intensity maximum. Rows are written
    /// top to bottom in decreasing height so larger z0 (cleaner fringes)
    /// appears at the top.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "P2")?;
        writeln!(
            out,
            "{} {}",
            self.screen_positions.len(),
            self.heights.len()
        )?;
        writeln!(out, "255")?;
        for row in (0..self.heights.len()).rev() {
            let line: Vec<String> = self.intensity[row]
                .iter()
                .map(|v| format!("{}", (v.clamp(0.0, 1.0) * 255.0).round() as u8))
                .collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Compute a fringe map over `heights` x `screen_positions`. The dephasing
/// rate is recomputed per row (gamma depends on D/z0); rows are evaluated
/// concurrently and assembled in the given height order.
pub fn fringe_map(
    heights: &[f64],
    screen_positions: &[f64],
    setup: &ExperimentSetup,
    metal: &MetalParameters,
    model: LossModel,
) -> Result<FringeMap, InterferenceError> {
    if heights.is_empty() || screen_positions.is_empty() {
        return Err(InterferenceError::EmptyGrid);
    }
    let phases: Vec<f64> = screen_positions
        .iter()
        .map(|&x| two_slit_phase(x, setup))
        .collect::<Result<_, _>>()?;

    let rows: Vec<(f64, Vec<f64>)> = heights
        .par_iter()
        .map(|&z0| -> Result<(f64, Vec<f64>), InterferenceError> {
            let mut row_setup = *setup;
            row_setup.height = z0;
            row_setup.validate()?;
            let breakdown = inverse_decoherence_length(&row_setup, metal, model)?;
            let alpha = breakdown.visibility;
            let row: Vec<f64> = phases
                .iter()
                .map(|&phi| {
                    fringe_intensity(phi, setup.plate_length, breakdown.inverse_length, 0.5)
                })
                .collect();
            Ok((alpha, row))
        })
        .collect::<Result<_, _>>()?;

    let global_max = rows
        .iter()
        .flat_map(|(_, row)| row.iter().cloned())
        .fold(f64::NEG_INFINITY, f64::max);
    let intensity = rows
        .iter()
        .map(|(_, row)| row.iter().map(|v| v / global_max).collect())
        .collect();
    Ok(FringeMap {
        heights: heights.to_vec(),
        screen_positions: screen_positions.to_vec(),
        intensity,
        row_visibility: rows.into_iter().map(|(alpha, _)| alpha).collect(),
    })
}

/// Order-of-magnitude checks of the model assumptions for one setup.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SanityReport {
    /// Vertical image-force deflection over the plate,
    /// `e^2 L^2 / (32 pi eps0 z0^2 m v^2)` (m).
    pub image_force_deflection: f64,
    /// Initial packet width the dispersion estimate uses (m).
    pub dispersion_initial_width: f64,
    /// Added minimum-uncertainty Gaussian spread over the flight,
    /// `sigma0 (sqrt(1 + (hbar t / (m sigma0^2))^2) - 1)` at `t = L/v` (m).
    pub dispersion_added_spread: f64,
    /// Temperature below which the classical reservoir weight fails,
    /// `hbar v / (k_B z0)` (K).
    pub thermal_crossover_temperature: f64,
}

/// Evaluate the scattered estimates that justify the model: image-force
/// deflection, packet dispersion, and the thermal crossover temperature.
pub fn sanity_estimates(setup: &ExperimentSetup) -> SanityReport {
    let z0 = setup.height;
    let v = setup.velocity;
    let flight_time = setup.plate_length / v;
    let deflection = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * setup.plate_length.powi(2)
        / (32.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * z0 * z0 * ELECTRON_MASS * v * v);
    let sigma0 = if setup.packet_width_x > 0.0 {
        setup.packet_width_x
    } else {
        1e-6
    };
    let spread_ratio = HBAR * flight_time / (ELECTRON_MASS * sigma0 * sigma0);
    let added = sigma0 * ((1.0 + spread_ratio * spread_ratio).sqrt() - 1.0);
    SanityReport {
        image_force_deflection: deflection,
        dispersion_initial_width: sigma0,
        dispersion_added_spread: added,
        thermal_crossover_temperature: HBAR * v / (BOLTZMANN * z0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{bundled_materials, find_material};
    use proptest::prelude::*;

    fn gold() -> MetalParameters {
        find_material(&bundled_materials(), "Au").unwrap().clone()
    }

    #[test]
    fn pristine_flight_is_a_pure_projector() {
        let rho = density_matrix_after_flight(0.0, 5.0e2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(rho.entry(i, j), Complex64::new(0.5, 0.0));
            }
        }
        let (lo, hi) = rho.eigenvalues();
        assert!(lo.abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn full_dephasing_leaves_the_classical_mixture() {
        let rho = density_matrix_after_flight(1e3, 1.0).unwrap();
        assert!(rho.entry(0, 1).norm() < 1e-300);
        assert_eq!(rho.entry(0, 0), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn half_life_off_diagonal() {
        // L/lambda = ln 2 halves the coherence: off-diagonals 1/4
        let rho = density_matrix_after_flight(2.0f64.ln(), 1.0).unwrap();
        assert!((rho.entry(0, 1).re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn negative_inputs_are_domain_errors() {
        assert!(density_matrix_after_flight(-1.0, 0.0).is_err());
        assert!(density_matrix_after_flight(1.0, -1.0).is_err());
    }

    #[test]
    fn visibility_trivial_cases() {
        assert_eq!(visibility(1e-2, 0.0), 1.0);
        let v = visibility(1e-2, 5.4e2);
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn visibility_from_fringe_extremes_is_exact() {
        // (I(0) - I(pi)) / (I(0) + I(pi)) = alpha, algebraically
        for (l, rate) in [(1e-2, 5.4e2), (1e-2, 50.0), (3e-2, 1e3)] {
            let alpha = visibility(l, rate);
            let bright = fringe_intensity(0.0, l, rate, 0.7);
            let dark = fringe_intensity(std::f64::consts::PI, l, rate, 0.7);
            let measured = (bright - dark) / (bright + dark);
            assert!((measured - alpha).abs() < 1e-15);
        }
    }

    #[test]
    fn fringe_intensity_quarter_period_and_dark_fringe() {
        assert!((fringe_intensity(std::f64::consts::FRAC_PI_2, 1.0, 1.0, 1.0) - 2.0).abs() < 1e-15);
        // alpha = 1: perfect dark fringe at delta_phi = pi
        let dark = fringe_intensity(std::f64::consts::PI, 0.0, 0.0, 1.0);
        assert!(dark.abs() < 1e-15);
        // 2 pi periodicity
        let a = fringe_intensity(0.3, 1e-2, 100.0, 1.0);
        let b = fringe_intensity(0.3 + 2.0 * std::f64::consts::PI, 1e-2, 100.0, 1.0);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn two_slit_phase_and_spacing() {
        let setup = ExperimentSetup::builder().build().unwrap();
        assert_eq!(two_slit_phase(0.0, &setup).unwrap(), 0.0);
        // 150 eV: lambda_e ~ 1.0e-10 m, spacing ~ 10 um at 1 m and D = 10 um
        let lambda_e = de_broglie_wavelength(setup.velocity);
        assert!((lambda_e - 1.0014e-10).abs() / 1.0014e-10 < 1e-3);
        let spacing = fringe_spacing(&setup).unwrap();
        assert!((spacing - 1.0014e-5).abs() / 1.0014e-5 < 1e-3);
        // one spacing advances the phase by 2 pi
        let phi = two_slit_phase(spacing, &setup).unwrap();
        assert!((phi - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn zero_screen_distance_is_a_config_error() {
        let mut setup = ExperimentSetup::builder().build().unwrap();
        setup.screen_distance = 0.0;
        assert!(matches!(
            two_slit_phase(1e-6, &setup),
            Err(InterferenceError::InvalidScreenDistance { .. })
        ));
    }

    #[test]
    fn fringe_map_envelope_matches_visibility() {
        let setup = ExperimentSetup::builder().build().unwrap();
        let metal = gold();
        let screen = aligned_screen_grid(&setup, 2, 12).unwrap();
        let heights: Vec<f64> = (0..8).map(|i| 60e-6 + 40e-6 * i as f64).collect();
        let map = fringe_map(&heights, &screen, &setup, &metal, LossModel::Lindhard).unwrap();
        for row in 0..heights.len() {
            let envelope = map.row_envelope(row);
            assert!(
                (envelope - map.row_visibility[row]).abs() < 1e-6,
                "row {row}: {envelope} vs {}",
                map.row_visibility[row]
            );
        }
        // monotone fade-in with height
        for w in map.row_visibility.windows(2) {
            assert!(w[1] > w[0]);
        }
        // far rows are nearly fully modulated, near rows nearly flat
        assert!(map.row_visibility.last().unwrap() > &0.5);
        assert!(map.row_visibility.first().unwrap() < &0.05);
        // normalized
        let max = map
            .intensity
            .iter()
            .flatten()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((max - 1.0).abs() < 1e-15);
        assert!(map.intensity.iter().flatten().all(|&v| v >= 0.0));
    }

    #[test]
    fn fringe_map_exports() {
        let setup = ExperimentSetup::builder().build().unwrap();
        let metal = gold();
        let screen = aligned_screen_grid(&setup, 1, 8).unwrap();
        let heights = [100e-6, 200e-6];
        let map = fringe_map(&heights, &screen, &setup, &metal, LossModel::Lindhard).unwrap();
        let mut csv = Vec::new();
        map.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("z0_m,"));
        assert_eq!(text.lines().count(), 1 + heights.len());
        let mut pgm = Vec::new();
        map.write_pgm(&mut pgm).unwrap();
        let text = String::from_utf8(pgm).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("P2"));
        assert_eq!(lines.next(), Some("17 2"));
        assert_eq!(lines.next(), Some("255"));
    }

    #[test]
    fn sanity_estimates_nominal_values() {
        // frozen from direct evaluation: deflection ~6 nm, added spread
        // ~0.013 um at sigma0 = 1 um, crossover ~0.55 K
        let setup = ExperimentSetup::builder().build().unwrap();
        let report = sanity_estimates(&setup);
        assert!(
            (report.image_force_deflection - 6.0e-9).abs() / 6.0e-9 < 0.01,
            "deflection = {:e}",
            report.image_force_deflection
        );
        assert!(report.image_force_deflection < 100e-9);
        assert!((report.dispersion_initial_width - 1e-6).abs() < 1e-18);
        assert!(
            (report.dispersion_added_spread - 1.262e-8).abs() / 1.262e-8 < 1e-3,
            "spread = {:e}",
            report.dispersion_added_spread
        );
        // the paper-scale statement: ~0.01 um per cm of flight
        assert!(report.dispersion_added_spread < 0.02e-6);
        assert!(
            (report.thermal_crossover_temperature - 0.5548).abs() < 1e-3,
            "T_c = {}",
            report.thermal_crossover_temperature
        );
    }

    #[test]
    fn sanity_wider_packet_disperses_less() {
        let narrow = ExperimentSetup::builder().build().unwrap();
        let wide = ExperimentSetup::builder()
            .packet_widths(2e-6, 2e-6, 1e-6)
            .build()
            .unwrap();
        let a = sanity_estimates(&narrow).dispersion_added_spread;
        let b = sanity_estimates(&wide).dispersion_added_spread;
        assert!(b < a);
        // frozen: 2 um initial width gives ~1.59 nm of extra spread
        assert!((b - 1.587e-9).abs() / 1.587e-9 < 1e-2, "spread = {b:e}");
    }

    proptest! {
        #[test]
        fn density_matrix_stays_physical(
            plate_length in 0.0f64..1.0,
            rate in 0.0f64..1e4,
        ) {
            let rho = density_matrix_after_flight(plate_length, rate).unwrap();
            prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(rho.trace().im.abs() < 1e-15);
            prop_assert!(rho.is_hermitian(1e-15));
            prop_assert!(rho.is_positive_semidefinite(1e-15));
            // diagonal conservation
            prop_assert_eq!(rho.entry(0, 0).re, 0.5);
            prop_assert_eq!(rho.entry(1, 1).re, 0.5);
        }

        #[test]
        fn visibility_identity_over_random_phases(
            rate in 0.0f64..2e3,
            phase in 0.0f64..10.0,
        ) {
            let l = 1e-2;
            let alpha = visibility(l, rate);
            let i = fringe_intensity(phase, l, rate, 1.0);
            prop_assert!(i >= 2.0 * (1.0 - alpha) - 1e-12);
            prop_assert!(i <= 2.0 * (1.0 + alpha) + 1e-12);
        }
    }
}
