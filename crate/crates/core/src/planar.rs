//! The planar Helmholtz Green's function `-(i/4) H0^(1)(k r)` and its
//! plane-wave representation over four sliding Sommerfeld-type contours.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contour::{integrate, Contour, QuadratureControl};
use crate::error::{Error, Result};
use crate::special::hankel_h0_1;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest admissible height of the vertical contour legs.
pub const MAX_TAIL_HEIGHT: f64 = 40.0;

/// Wavenumber and observation point, source at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarProblem {
    pub k: f64,
    pub y1: f64,
    pub y2: f64,
}

impl PlanarProblem {
    pub fn new(k: f64, y1: f64, y2: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::PreconditionViolation(format!(
                "wavenumber must be positive, got {k}"
            )));
        }
        if !(y1.is_finite() && y2.is_finite()) {
            return Err(Error::PreconditionViolation("coordinates must be finite".into()));
        }
        Ok(PlanarProblem { k, y1, y2 })
    }

    pub fn radius(&self) -> f64 {
        self.y1.hypot(self.y2)
    }

    /// Signed distance of the point from the boundary of `X^(m)`, positive
    /// inside.
    pub fn depth_in(&self, m: usize) -> f64 {
        match m {
            1 => self.y1,
            2 => self.y2,
            3 => -self.y1,
            _ => -self.y2,
        }
    }

    /// Domains `X^(m)` that contain the point.
    pub fn domains(&self) -> Vec<usize> {
        (1..=4).filter(|&m| self.depth_in(m) > 0.0).collect()
    }
}

/// `-(i/4) H0^(1)(k r)`.
pub fn planar_closed(p: &PlanarProblem) -> Result<Complex64> {
    let r = p.radius();
    if r == 0.0 {
        return Err(Error::DomainError("the field is singular at the source".into()));
    }
    Ok(-0.25 * I * hankel_h0_1(p.k * r)?)
}

/// Height `T` of the vertical legs for which the truncated tails fall below
/// `rel_tol`.
pub fn tail_height(k: f64, depth: f64, rel_tol: f64) -> Result<f64> {
    let needed = (1.0 / rel_tol).ln().max(1.0) / (k * depth);
    let t = needed.asinh().max(4.0);
    if t > MAX_TAIL_HEIGHT || !t.is_finite() {
        return Err(Error::TailNotConverged(format!(
            "legs would need height {t} (depth {depth}, k = {k})"
        )));
    }
    Ok(t)
}

/// The contour for domain `m`: from `-pi/2 + iT` down to `-pi/2`, along the
/// real axis to `pi/2`, then down to `pi/2 - iT`, all shifted by
/// `(m - 1) pi / 2`.
pub fn planar_contour(m: usize, height: f64) -> Result<Contour> {
    if !(1..=4).contains(&m) {
        return Err(Error::PreconditionViolation(format!(
            "planar domain index must be in 1..=4, got {m}"
        )));
    }
    let shift = Complex64::new((m as f64 - 1.0) * FRAC_PI_2, 0.0);
    let a = Complex64::new(-FRAC_PI_2, 0.0);
    let b = Complex64::new(FRAC_PI_2, 0.0);
    let up = Complex64::new(0.0, height);
    let mid = Complex64::new(0.0, 1.0);
    Contour::polyline(&[
        a + up + shift,
        a + mid + shift,
        a + shift,
        b + shift,
        b - mid + shift,
        b - up + shift,
    ])
}

/// `(1/(4 pi i)) int_{gamma^(m)} exp(i k (y1 cos psi + y2 sin psi)) d psi`.
pub fn planar_pw(p: &PlanarProblem, m: usize, ctrl: &QuadratureControl) -> Result<Complex64> {
    if !(1..=4).contains(&m) {
        return Err(Error::PreconditionViolation(format!(
            "planar domain index must be in 1..=4, got {m}"
        )));
    }
    if p.radius() == 0.0 {
        return Err(Error::DomainError("the field is singular at the source".into()));
    }
    let depth = p.depth_in(m);
    if !(depth > 0.0) {
        return Err(Error::DomainViolation(format!(
            "({}, {}) is not in X^({m})",
            p.y1, p.y2
        )));
    }
    let height = tail_height(p.k, depth, ctrl.rel_tol)?;
    let contour = planar_contour(m, height)?;
    let (k, y1, y2) = (p.k, p.y1, p.y2);
    let q = integrate(
        |psi: Complex64| Ok((I * k * (y1 * psi.cos() + y2 * psi.sin())).exp()),
        &contour,
        ctrl,
    )?;
    Ok(q.value / (4.0 * PI * I))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctrl() -> QuadratureControl {
        QuadratureControl::default()
    }

    #[test]
    fn closed_form_at_unit_distance() {
        let p = PlanarProblem::new(1.0, 1.0, 0.0).unwrap();
        let v = planar_closed(&p).unwrap();
        assert!((v - Complex64::new(0.022_064_241_053_919_24, -0.191_299_421_639_491_65)).norm() < 1e-13);
        let q = PlanarProblem::new(1.0, 0.6, -0.8).unwrap();
        assert!((planar_closed(&q).unwrap() - v).norm() < 1e-12);
        assert!(planar_closed(&PlanarProblem::new(1.0, 0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn far_field_amplitude() {
        let p = PlanarProblem::new(1.0, 30.0, 0.0).unwrap();
        let v = planar_closed(&p).unwrap().norm() * 30f64.sqrt();
        let want = 1.0 / (2.0 * (2.0 * PI).sqrt());
        assert!((v - want).abs() < 0.05 * want);
    }

    #[test]
    fn representation_matches_hankel() {
        let p = PlanarProblem::new(1.0, 1.3, -0.4).unwrap();
        let v = planar_pw(&p, 1, &ctrl()).unwrap();
        assert!((v - Complex64::new(0.079_564_219_973_386_35, -0.147_076_611_945_744_95)).norm() < 1e-9);
        assert!((v - planar_closed(&p).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn overlapping_domains_agree() {
        let p = PlanarProblem::new(1.0, 2.0, 1.5).unwrap();
        let a = planar_pw(&p, 1, &ctrl()).unwrap();
        let b = planar_pw(&p, 2, &ctrl()).unwrap();
        assert!((a - b).norm() < 1e-9);
        let p = PlanarProblem::new(2.0, -0.7, -1.1).unwrap();
        let a = planar_pw(&p, 3, &ctrl()).unwrap();
        let b = planar_pw(&p, 4, &ctrl()).unwrap();
        assert!((a - b).norm() < 1e-9);
        assert!((a - planar_closed(&p).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn domain_checks() {
        let p = PlanarProblem::new(1.0, -1.0, 0.5).unwrap();
        assert!(matches!(planar_pw(&p, 1, &ctrl()), Err(Error::DomainViolation(_))));
        assert_eq!(p.domains(), vec![2, 3]);
        assert!(planar_pw(&PlanarProblem::new(1.0, 0.0, 0.0).unwrap(), 1, &ctrl()).is_err());
        assert!(PlanarProblem::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn tail_height_rule() {
        assert_eq!(tail_height(1.0, 100.0, 1e-10).unwrap(), 4.0);
        let t = tail_height(1.0, 0.5, 1e-10).unwrap();
        assert!(t > 4.0 && ((1e10f64).ln() / 0.5).asinh() - t < 1e-12);
        assert!(matches!(
            tail_height(1.0, 1e-20, 1e-10),
            Err(Error::TailNotConverged(_))
        ));
    }

    #[test]
    fn radiation_phase() {
        let k = 1.0;
        let dir = (0.3f64.cos(), 0.3f64.sin());
        let arg = |r: f64| {
            let p = PlanarProblem::new(k, r * dir.0, r * dir.1).unwrap();
            planar_pw(&p, 1, &ctrl()).unwrap().arg()
        };
        for r in [6.0, 9.0, 14.0] {
            let h = 0.01;
            let mut d = arg(r + h) - arg(r - h);
            if d > PI {
                d -= 2.0 * PI;
            } else if d < -PI {
                d += 2.0 * PI;
            }
            let slope = d / (2.0 * h);
            assert!((slope - k).abs() < 0.05 * k, "r = {r}: {slope}");
        }
    }

    #[test]
    fn helmholtz_residual_decays() {
        let k = 1.0;
        let (y1, y2) = (1.1, 0.7);
        let u = |a: f64, b: f64| planar_pw(&PlanarProblem::new(k, a, b).unwrap(), 1, &QuadratureControl::new(1e-13, 24).unwrap()).unwrap();
        let residual = |h: f64| {
            let lap = (u(y1 + h, y2) + u(y1 - h, y2) + u(y1, y2 + h) + u(y1, y2 - h)
                - 4.0 * u(y1, y2))
                / (h * h);
            (lap + k * k * u(y1, y2)).norm()
        };
        let r1 = residual(0.04);
        let r2 = residual(0.02);
        let ratio = r1 / r2;
        assert!((3.6..=4.4).contains(&ratio), "ratio {ratio} ({r1}, {r2})");
    }
}
