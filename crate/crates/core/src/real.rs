//! Scalar abstraction for the numerical kernel.
//!
//! The integrator and the special functions are written against [`Real`] so
//! they can be instantiated at `f32` or `f64`. The physics pipeline itself is
//! fixed to `f64`: it chains CODATA constants spanning thirty orders of
//! magnitude and targets 1e-6 relative agreement between independent
//! formulas, which single precision cannot deliver.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable by the quadrature core and special functions.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal (node tables, coefficients).
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("representable literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}
