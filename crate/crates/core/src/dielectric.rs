//! Longitudinal response of the plate.
//!
//! Quasi-free electron gas in the random phase approximation, restricted to
//! the low-frequency sector the flying electron actually probes (radio
//! frequencies, ~1e-5 of the Fermi energy). The imaginary part of the
//! susceptibility is the linear-in-omega particle-hole form, nonzero only in
//! the window `omega/v_F < q < 2 k_F`; the real part is its static limit,
//! which is accurate at these frequencies. Exchange and Coulomb correlations
//! enter through the Hubbard local-field factor. Lattice screening is a
//! static ion dielectric constant; the lattice contribution to dissipation is
//! set to zero.

use num_complex::Complex64;

use crate::constants::{BOLTZMANN, ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR, VACUUM_PERMITTIVITY};
use crate::materials::MetalParameters;
use crate::quadrature::{integrate, Domain, QuadratureError, Tolerances};

/// Which susceptibility enters the loss function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LossModel {
    /// Bare RPA (Lindhard) susceptibility.
    Lindhard,
    /// Lindhard susceptibility with the Hubbard local-field correction.
    Hubbard,
}

impl std::fmt::Display for LossModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LossModel::Lindhard => write!(f, "lindhard"),
            LossModel::Hubbard => write!(f, "hubbard"),
        }
    }
}

/// Real and imaginary parts of a susceptibility (dimensionless).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SusceptibilityValue {
    pub real_part: f64,
    pub imag_part: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum DielectricError {
    #[error("momentum must be positive, got {q:e} 1/m")]
    NonPositiveMomentum { q: f64 },
    #[error("frequency must be non-negative, got {omega:e} rad/s")]
    NegativeFrequency { omega: f64 },
    #[error("temperature must be positive, got {temperature:e} K")]
    NonPositiveTemperature { temperature: f64 },
    #[error("Hubbard denominator vanished at q = {q:e} 1/m, omega = {omega:e} rad/s")]
    HubbardSingularity { q: f64, omega: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

fn check_q_omega(q: f64, omega: f64) -> Result<(), DielectricError> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(DielectricError::NonPositiveMomentum { q });
    }
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(DielectricError::NegativeFrequency { omega });
    }
    Ok(())
}

/// Low-frequency imaginary part of the Lindhard susceptibility:
/// `e^2 m^2 omega / (2 pi eps0 hbar^3 q^3)` inside the particle-hole window
/// `omega/v_F < q < 2 k_F`, zero outside.
pub fn im_chi_lindhard(
    q: f64,
    omega: f64,
    metal: &MetalParameters,
) -> Result<f64, DielectricError> {
    check_q_omega(q, omega)?;
    let v_f = metal.fermi_velocity();
    if q <= omega / v_f || q >= 2.0 * metal.fermi_wave_vector {
        return Ok(0.0);
    }
    let e2 = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE;
    let m2 = ELECTRON_MASS * ELECTRON_MASS;
    Ok(e2 * m2 * omega
        / (2.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * HBAR.powi(3) * q.powi(3)))
}

/// The dimensionless Lindhard bracket
/// `1 + (1 - u^2)/(2u) ln((1+u)/(1-u))` at `u = q / (2 k_F)`.
///
/// Continuous through u = 1 where the logarithm's coefficient vanishes; the
/// value there is exactly 1. Evaluated with `ln_1p` so the u -> 0 limit
/// (exactly 2) comes out clean.
pub fn lindhard_bracket(u: f64) -> f64 {
    if u >= 1.0 {
        if u == 1.0 {
            return 1.0;
        }
        let log_term = ((u + 1.0) / (u - 1.0)).ln();
        return 1.0 + (1.0 - u * u) / (2.0 * u) * log_term;
    }
    if u == 0.0 {
        return 2.0;
    }
    let log_term = u.ln_1p() - (-u).ln_1p();
    1.0 + (1.0 - u * u) / (2.0 * u) * log_term
}

/// Static limit of the real part of the Lindhard susceptibility.
pub fn re_chi_lindhard_static(q: f64, metal: &MetalParameters) -> Result<f64, DielectricError> {
    check_q_omega(q, 0.0)?;
    let k_f = metal.fermi_wave_vector;
    let prefactor = ELECTRON_MASS * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * k_f
        / (2.0 * std::f64::consts::PI.powi(2) * VACUUM_PERMITTIVITY * HBAR * HBAR * q * q);
    Ok(prefactor * lindhard_bracket(q / (2.0 * k_f)))
}

/// Hubbard local-field factor `G(q) = q^2 / (2 (q^2 + k_F^2 + k_TF^2))`.
/// Ranges over [0, 1/2).
pub fn hubbard_local_field(q: f64, metal: &MetalParameters) -> f64 {
    let q2 = q * q;
    let k_f2 = metal.fermi_wave_vector * metal.fermi_wave_vector;
    let k_tf2 = metal.thomas_fermi_wave_vector * metal.thomas_fermi_wave_vector;
    0.5 * q2 / (q2 + k_f2 + k_tf2)
}

/// Hubbard-corrected susceptibility `chi / (1 - G chi)` on the low-frequency
/// Lindhard values (static real part, linear imaginary part).
pub fn hubbard_chi(
    q: f64,
    omega: f64,
    metal: &MetalParameters,
) -> Result<SusceptibilityValue, DielectricError> {
    let re = re_chi_lindhard_static(q, metal)?;
    let im = im_chi_lindhard(q, omega, metal)?;
    let g = hubbard_local_field(q, metal);
    // chi/(1 - G chi) expanded in real arithmetic; Im picks up exactly
    // 1/|1 - G chi|^2
    let denom = (1.0 - g * re).powi(2) + (g * im).powi(2);
    if denom == 0.0 {
        return Err(DielectricError::HubbardSingularity { q, omega });
    }
    Ok(SusceptibilityValue {
        real_part: (re - g * (re * re + im * im)) / denom,
        imag_part: im / denom,
    })
}

/// Electronic susceptibility under the chosen model.
pub fn susceptibility(
    q: f64,
    omega: f64,
    metal: &MetalParameters,
    model: LossModel,
) -> Result<SusceptibilityValue, DielectricError> {
    match model {
        LossModel::Lindhard => Ok(SusceptibilityValue {
            real_part: re_chi_lindhard_static(q, metal)?,
            imag_part: im_chi_lindhard(q, omega, metal)?,
        }),
        LossModel::Hubbard => hubbard_chi(q, omega, metal),
    }
}

/// Loss function `Im[-1/eps] ~ eps2 / eps1^2` with
/// `eps1 = eps_i + Re chi`, `eps2 = Im chi`. Exactly zero outside the
/// particle-hole window; never negative.
pub fn loss_function(
    q: f64,
    omega: f64,
    metal: &MetalParameters,
    model: LossModel,
) -> Result<f64, DielectricError> {
    let chi = susceptibility(q, omega, metal, model)?;
    if chi.imag_part == 0.0 {
        return Ok(0.0);
    }
    let eps1 = metal.ion_dielectric_constant + chi.real_part;
    Ok(chi.imag_part / (eps1 * eps1))
}

/// `coth(hbar omega / (2 k_B T))`, series-stabilized near zero where it goes
/// over into the classical `2 k_B T / (hbar omega)`.
pub fn thermal_weight(omega: f64, temperature: f64) -> f64 {
    let x = HBAR * omega / (2.0 * BOLTZMANN * temperature);
    if x < 1e-4 {
        1.0 / x + x / 3.0
    } else {
        1.0 / x.tanh()
    }
}

/// Reservoir memory function
/// `M_q(t) = int_0^{q v_F} domega e^{-i omega t} coth(hbar beta omega / 2) Im[-1/eps](q, omega)`.
///
/// The upper limit is the particle-hole window edge where the loss function
/// vanishes. For `q >= 2 k_F` the kernel is identically zero. `|M|` decays on
/// the scale `hbar / E_F`, which is what justifies slicing the flight into
/// memoryless segments.
pub fn memory_kernel(
    q: f64,
    time: f64,
    metal: &MetalParameters,
    temperature: f64,
) -> Result<Complex64, DielectricError> {
    memory_kernel_with(q, time, metal, temperature, Tolerances::default())
}

/// [`memory_kernel`] with explicit quadrature tolerances.
pub fn memory_kernel_with(
    q: f64,
    time: f64,
    metal: &MetalParameters,
    temperature: f64,
    tol: Tolerances<f64>,
) -> Result<Complex64, DielectricError> {
    check_q_omega(q, 0.0)?;
    if !(temperature > 0.0) {
        return Err(DielectricError::NonPositiveTemperature { temperature });
    }
    if q >= 2.0 * metal.fermi_wave_vector {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let omega_max = q * metal.fermi_velocity();
    // Lindhard: eps2 linear in omega, eps1 static, so the loss slope is a
    // constant and the omega * coth factor is assembled stably by hand.
    let slope = loss_function(q, 0.5 * omega_max, metal, LossModel::Lindhard)? / (0.5 * omega_max);
    let weighted = move |omega: f64| -> f64 {
        if omega <= 0.0 {
            return 2.0 * BOLTZMANN * temperature / HBAR * slope;
        }
        slope * omega * thermal_weight(omega, temperature)
    };
    let real = integrate(
        |omega: f64| (omega * time).cos() * weighted(omega),
        Domain::Finite(0.0, omega_max),
        tol,
    )?;
    let imag = integrate(
        |omega: f64| -(omega * time).sin() * weighted(omega),
        Domain::Finite(0.0, omega_max),
        tol,
    )?;
    Ok(Complex64::new(real.value, imag.value))
}
