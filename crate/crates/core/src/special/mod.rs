//! Special functions: the gamma function, Legendre functions of complex
//! degree and the Bessel/Hankel functions of order zero.

mod bessel;
mod gamma;
mod legendre;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{bessel_j0, bessel_j1, bessel_y0, bessel_y1, hankel_h0_1};
pub use gamma::{digamma, gamma};
pub use legendre::{
    legendre_p, legendre_p_complex, legendre_p_infinity, legendre_p_integral, legendre_p_series,
    legendre_p_near_minus_one,
};

/// Minimum distance from a degree to the nearest integer.
pub const RESONANCE_GUARD: f64 = 1e-6;

/// A complex degree `lambda` bounded away from the integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Degree {
    lambda: Complex64,
}

impl Degree {
    /// Validates the resonance guard.
    pub fn new(lambda: Complex64) -> Result<Self> {
        if !(lambda.re.is_finite() && lambda.im.is_finite()) {
            return Err(Error::ResonantDegree(format!("{lambda}")));
        }
        let nearest = Complex64::new(lambda.re.round(), 0.0);
        if (lambda - nearest).norm() < RESONANCE_GUARD {
            return Err(Error::ResonantDegree(format!("{lambda}")));
        }
        Ok(Degree { lambda })
    }

    /// Shorthand for `Degree::new(Complex64::new(re, im))`.
    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    /// Bypasses the resonance guard. Only meant for polynomial checks at
    /// integer degree, where the functions that do not divide by
    /// `sin(pi lambda)` are still well defined.
    pub fn new_unchecked(lambda: Complex64) -> Self {
        Degree { lambda }
    }

    pub fn value(&self) -> Complex64 {
        self.lambda
    }

    /// The degree `-1 - lambda`, which defines the same Legendre function.
    pub fn reflected(&self) -> Degree {
        Degree {
            lambda: -1.0 - self.lambda,
        }
    }

    /// `lambda (lambda + 1)`.
    pub fn eigen_shift(&self) -> Complex64 {
        self.lambda * (self.lambda + 1.0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lambda)
    }
}

/// Truncation control for the power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 500,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_terms == 0 {
            return Err(Error::PreconditionViolation(format!(
                "series control needs rel_tol > 0 and max_terms >= 1 (got {rel_tol}, {max_terms})"
            )));
        }
        Ok(SeriesControl { rel_tol, max_terms })
    }
}
