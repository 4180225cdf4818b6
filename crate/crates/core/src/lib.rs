//! Plane-wave representations of solutions of the Laplace-Beltrami equation
//! `(Delta + lambda (lambda + 1)) u = 0` on the unit sphere.
//!
//! The Green's function of the whole sphere is evaluated two ways: in closed
//! form through the Legendre function, and as a contour integral of plane
//! waves over the sphere at infinity of the complexified sphere. A system of
//! five sliding contours extends the integral representation from the lower
//! hemisphere to everything outside a small cap around the source.

pub mod characteristics;
pub mod contour;
pub mod error;
pub mod geometry;
pub mod green;
pub mod planar;
pub mod plane_waves;
pub mod special;
pub mod verification;

pub use error::{Error, Result};
pub use num_complex::Complex64;
