//! Which-path dephasing of a single electron flying over a metallic plate.
//!
//! A free electron crossing a conducting plate in a superposition of two
//! parallel paths excites the plate's electron gas differently along each
//! path. The trace left behind distinguishes the paths and suppresses the
//! interference fringes. This crate computes that suppression from first
//! principles: the low-frequency Lindhard response of the plate, the
//! fluctuation-dissipation loss spectrum, the geometry and material
//! quadratures they induce, the inverse decoherence length, and the
//! resulting fringe visibility.
//!
//! Everything is SI internally. The numerical kernel ([`quadrature`],
//! [`special`]) is generic over the scalar type; the physics pipeline is
//! `f64`.

// negated comparisons are deliberate: `!(x > 0.0)` rejects NaN where
// `x <= 0.0` would wave it through
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// node and coefficient tables keep their published digits
#![allow(clippy::excessive_precision)]

pub mod constants;
pub mod dephasing;
pub mod dielectric;
pub mod interference;
pub mod materials;
pub mod quadrature;
pub mod real;
pub mod setup;
pub mod special;
pub mod spectral;

pub use constants::PhysicalConstants;
pub use dephasing::{
    closed_form_lambda_inverse, consistency_audit, decoherence_time, extracted_mu,
    extracted_mu_with, inverse_decoherence_length, inverse_decoherence_length_with,
    momentum_loss_integral, momentum_loss_integral_with, mu_asymptotic, mu_asymptotic_first_order,
    mu_material, mu_material_with, relaxation_rate, semiclassical_relaxation_rate,
    thermal_de_broglie, AuditReport, DephasingBreakdown, DephasingError, RegimeWarning, TimeScales,
};
pub use dielectric::{
    hubbard_chi, im_chi_lindhard, loss_function, memory_kernel, re_chi_lindhard_static,
    DielectricError, LossModel, SusceptibilityValue,
};
pub use interference::{
    aligned_screen_grid, de_broglie_wavelength, density_matrix_after_flight, fringe_intensity,
    fringe_map, fringe_spacing, sanity_estimates, two_slit_phase, visibility, DensityMatrix2,
    FringeMap, InterferenceError, SanityReport,
};
pub use materials::{
    bundled_materials, electron_velocity, find_material, ion_screening_constant, lindhard_argument,
    load_material_table, parse_material_table, IonData, MaterialError, MetalParameters,
};
pub use setup::{ExperimentSetup, SetupBuilder, SetupError};
pub use spectral::{
    broadened_delta, broadened_delta_first_order, gamma_geometry, gamma_geometry_with,
    spectral_asymptotic, spectral_asymptotic_with, spectral_reduced_exact,
    spectral_reduced_exact_with, spectral_reduced_saddle, spectral_reduced_saddle_with,
    vertical_overlap, SpectralError, SpectralPoint,
};

/// Default instantiation of the generic tolerance settings.
pub type Tolerances = quadrature::Tolerances<f64>;
/// Default instantiation of the generic integration domain.
pub type Domain = quadrature::Domain<f64>;
/// Default instantiation of the generic quadrature result.
pub type QuadratureResult = quadrature::QuadratureResult<f64>;
