//! Spectral functions of the unperturbed flight.
//!
//! The dephasing rate couples the reservoir loss spectrum to a spectral
//! function of the free flight over the plate. Three levels of reduction are
//! implemented:
//!
//! * [`spectral_reduced_exact`]: the angular integral done numerically, with
//!   the polar angle fixed by the energy-momentum constraint
//!   `sin(theta) = -omega/(q v)` and the azimuthal integral resolved around
//!   its sharp peaks at `phi = +/- pi/2`;
//! * [`spectral_reduced_saddle`]: the azimuthal integral collapsed onto the
//!   peaks by a saddle-point substitution, leaving one integral over the
//!   peak coordinate;
//! * [`spectral_asymptotic`]: the plateau value at `q >> omega/v` in the
//!   pointlike-packet limit, which is all the metallic pipeline needs.
//!
//! The frequency integral of `S(omega)/omega` collapses into the geometry
//! function [`gamma_geometry`], which depends only on the ratio of path
//! separation to height. That identity pins the normalization of every
//! function here and is enforced in the acceptance suite.

use num_complex::Complex64;

use crate::quadrature::{integrate, Domain, QuadratureError, Tolerances};
use crate::setup::ExperimentSetup;
use crate::special::{erfc, erfcx};

/// One sample of a reduced spectral function on a `(q, omega)` grid.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SpectralPoint {
    /// Momentum transfer (1/m).
    pub q: f64,
    /// Angular frequency (rad/s).
    pub omega: f64,
    /// Dimensionless spectral value.
    pub value: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("transverse momentum q_tilde must be positive, got {q_tilde:e} 1/m")]
    NonPositiveTransverseMomentum { q_tilde: f64 },
    #[error("momentum must be positive, got {q:e} 1/m")]
    NonPositiveMomentum { q: f64 },
    #[error("frequency must be non-negative, got {omega:e} rad/s")]
    NegativeFrequency { omega: f64 },
    #[error("geometry argument must be non-negative, got {x}")]
    NegativeArgument { x: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Gaussian-times-complement factor `exp(p) * erfc(a)^2` assembled without
/// overflow: for `a > 0` the complement is expressed through the scaled
/// `erfcx` and its Gaussian moved into the exponent.
fn damped_erfc_squared(p: f64, a: f64) -> f64 {
    if a <= 0.0 {
        let c = erfc(a);
        p.exp() * c * c
    } else {
        let c = erfcx(a);
        (p - 2.0 * a * a).exp() * c * c
    }
}

/// Vertical overlap integral of the packet with the screened half-space:
///
/// `I_z = 1/(i q_z - q~) * pi/(2 q~) * exp((q~ l_z)^2/4 - q~ z0) * [1 - erf(q~ l_z/2 - z0/l_z)]`
///
/// For `l_z -> 0` this reduces to `pi exp(-q~ z0) / (q~ (i q_z - q~))`.
pub fn vertical_overlap(
    q_z: f64,
    q_tilde: f64,
    setup: &ExperimentSetup,
) -> Result<Complex64, SpectralError> {
    if !(q_tilde > 0.0) || !q_tilde.is_finite() {
        return Err(SpectralError::NonPositiveTransverseMomentum { q_tilde });
    }
    let z0 = setup.height;
    let l_z = setup.packet_width_z;
    // envelope = exp((q~ l_z)^2/4 - q~ z0) * (1 - erf(q~ l_z/2 - z0/l_z)),
    // which for a = q~ l_z/2 - z0/l_z > 0 equals erfcx(a) exp(-(z0/l_z)^2)
    let envelope = if l_z == 0.0 {
        2.0 * (-q_tilde * z0).exp()
    } else {
        let b = 0.5 * q_tilde * l_z;
        let c = z0 / l_z;
        let a = b - c;
        if a <= 0.0 {
            (b * b - q_tilde * z0).exp() * erfc(a)
        } else {
            (-c * c).exp() * erfcx(a)
        }
    };
    let magnitude = std::f64::consts::PI / (2.0 * q_tilde) * envelope;
    // 1/(i q_z - q~) = -(q~ + i q_z) / (q~^2 + q_z^2)
    let denom = q_tilde * q_tilde + q_z * q_z;
    Ok(Complex64::new(-q_tilde / denom, -q_z / denom) * magnitude)
}

/// Reduced spectral function with the azimuthal integral done numerically.
///
/// The polar delta constraint is satisfiable only for `q > omega/v`; outside
/// that the function is zero (not an error: callers sweep grids). The
/// integrand peaks sharply at `phi = +/- pi/2`, so the domain is split there
/// and each quadrant handed to the adaptive integrator separately.
pub fn spectral_reduced_exact(
    q: f64,
    omega: f64,
    setup: &ExperimentSetup,
) -> Result<f64, SpectralError> {
    spectral_reduced_exact_with(q, omega, setup, Tolerances::default())
}

/// [`spectral_reduced_exact`] with explicit quadrature tolerances.
pub fn spectral_reduced_exact_with(
    q: f64,
    omega: f64,
    setup: &ExperimentSetup,
    tol: Tolerances<f64>,
) -> Result<f64, SpectralError> {
    check_q_omega(q, omega)?;
    let v = setup.velocity;
    if q * v <= omega {
        return Ok(0.0);
    }
    let sin_theta0 = omega / (q * v);
    let cos_theta0 = (1.0 - sin_theta0 * sin_theta0).sqrt();
    let z0 = setup.height;
    let (l_x, l_y, l_z) = (
        setup.packet_width_x,
        setup.packet_width_y,
        setup.packet_width_z,
    );
    let d = setup.path_separation;

    let lx_term = -0.5 * (l_x * omega / v).powi(2);
    let integrand = |phi: f64| -> f64 {
        let c = phi.cos() * cos_theta0;
        let c2 = c * c;
        let w = (c2 + sin_theta0 * sin_theta0).sqrt();
        let bracket = 1.0 - (d * q * c).cos();
        let exponent =
            lx_term - 0.5 * (l_y * q).powi(2) * c2 - (2.0 * z0 * q + 0.5 * (q * l_z).powi(2)) * w;
        let z_factor = if l_z == 0.0 {
            4.0 * exponent.exp()
        } else {
            let a = 0.5 * q * l_z * w - z0 / l_z;
            damped_erfc_squared(exponent, a)
        };
        omega / (8.0 * v * q) * bracket * z_factor / (w * w)
    };

    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut total = 0.0;
    for k in 0..4 {
        let r = integrate(
            integrand,
            Domain::Finite(k as f64 * half_pi, (k + 1) as f64 * half_pi),
            tol,
        )?;
        total += r.value;
    }
    Ok(total)
}

/// Reduced spectral function after the saddle-point collapse of the
/// azimuthal peaks, leaving one integral over the scaled peak coordinate.
pub fn spectral_reduced_saddle(
    q: f64,
    omega: f64,
    setup: &ExperimentSetup,
) -> Result<f64, SpectralError> {
    spectral_reduced_saddle_with(q, omega, setup, Tolerances::default())
}

/// [`spectral_reduced_saddle`] with explicit quadrature tolerances.
pub fn spectral_reduced_saddle_with(
    q: f64,
    omega: f64,
    setup: &ExperimentSetup,
    tol: Tolerances<f64>,
) -> Result<f64, SpectralError> {
    check_q_omega(q, omega)?;
    let v = setup.velocity;
    if q * v <= omega || omega == 0.0 {
        return Ok(0.0);
    }
    let sin_theta0 = omega / (q * v);
    let prefactor = 1.0 / (1.0 - sin_theta0 * sin_theta0).sqrt();
    let z0 = setup.height;
    let (l_x, l_y, l_z) = (
        setup.packet_width_x,
        setup.packet_width_y,
        setup.packet_width_z,
    );
    let b = setup.path_separation * omega / v;
    let geo = 2.0 * z0 * omega / v;
    let lx_term = -0.5 * (l_x * omega / v).powi(2);
    let ly_scale = 0.5 * (l_y * omega / v).powi(2);
    let lz_scale = 0.5 * (l_z * omega / v).powi(2);

    let integrand = |u: f64| -> f64 {
        let s = (1.0 + u * u).sqrt();
        let bracket = 1.0 - (b * u).cos();
        let exponent = -geo * s + lx_term - ly_scale * u * u - lz_scale * s;
        let z_factor = if l_z == 0.0 {
            exponent.exp()
        } else {
            let a = 0.5 * l_z * omega / v * s - z0 / l_z;
            0.25 * damped_erfc_squared(exponent, a)
        };
        bracket / (1.0 + u * u) * z_factor
    };

    // even in u
    let r = integrate(integrand, Domain::HalfLine(0.0), tol)?;
    Ok(2.0 * prefactor * r.value)
}

/// Plateau value of the reduced spectral function at `q >> omega/v` in the
/// pointlike-packet limit:
///
/// `S(omega) = int du [1 - cos(D omega u / v)] / (1 + u^2) exp(-2 z0 omega sqrt(1+u^2) / v)`
pub fn spectral_asymptotic(omega: f64, setup: &ExperimentSetup) -> Result<f64, SpectralError> {
    spectral_asymptotic_with(omega, setup, Tolerances::default())
}

/// [`spectral_asymptotic`] with explicit quadrature tolerances.
pub fn spectral_asymptotic_with(
    omega: f64,
    setup: &ExperimentSetup,
    tol: Tolerances<f64>,
) -> Result<f64, SpectralError> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(SpectralError::NegativeFrequency { omega });
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    let v = setup.velocity;
    let a = 2.0 * setup.height * omega / v;
    let b = setup.path_separation * omega / v;
    let integrand =
        move |u: f64| (1.0 - (b * u).cos()) / (1.0 + u * u) * (-a * (1.0 + u * u).sqrt()).exp();
    let r = integrate(integrand, Domain::HalfLine(0.0), tol)?;
    Ok(2.0 * r.value)
}

/// Geometry function
/// `gamma(x) = 1/2 int du/(1+u^2) ln[1 + (x^2/4) u^2/(1+u^2)]`,
/// the frequency integral of `S(omega)/omega` at separation ratio `x = D/z0`.
/// Monotone increasing, `gamma(0) = 0`, small-x limit `(pi/16) x^2`.
pub fn gamma_geometry(x: f64) -> Result<f64, SpectralError> {
    gamma_geometry_with(x, Tolerances::default())
}

/// [`gamma_geometry`] with explicit quadrature tolerances.
pub fn gamma_geometry_with(x: f64, tol: Tolerances<f64>) -> Result<f64, SpectralError> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpectralError::NegativeArgument { x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let quarter_x2 = 0.25 * x * x;
    let integrand = move |u: f64| {
        let u2 = u * u;
        (quarter_x2 * u2 / (1.0 + u2)).ln_1p() / (1.0 + u2)
    };
    // even in u
    let r = integrate(integrand, Domain::HalfLine(0.0), tol)?;
    Ok(r.value)
}

/// Plate-length broadened momentum delta
/// `delta_L(q) = 4 sin^2(L q / 2) / (2 pi L q^2)`:
/// unit area, height `L/(2 pi)` at `q = 0`, width of order `1/L`.
pub fn broadened_delta(q: f64, plate_length: f64) -> f64 {
    let half = 0.5 * plate_length * q;
    if half == 0.0 {
        return plate_length / (2.0 * std::f64::consts::PI);
    }
    let s = half.sin();
    4.0 * s * s / (2.0 * std::f64::consts::PI * plate_length * q * q)
}

/// First-order broadened delta `sin(q L / 2) / (pi q)` arising from the
/// single plate-edge integral in the time-sliced derivation. Same `q = 0`
/// value and unit area as [`broadened_delta`].
pub fn broadened_delta_first_order(q: f64, plate_length: f64) -> f64 {
    let half = 0.5 * plate_length * q;
    if half == 0.0 {
        return plate_length / (2.0 * std::f64::consts::PI);
    }
    half.sin() / (std::f64::consts::PI * q)
}

fn check_q_omega(q: f64, omega: f64) -> Result<(), SpectralError> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(SpectralError::NonPositiveMomentum { q });
    }
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(SpectralError::NegativeFrequency { omega });
    }
    Ok(())
}
