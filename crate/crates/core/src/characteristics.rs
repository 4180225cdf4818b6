//! Characteristic lines of the complex sphere and the maps between the real
//! sphere and the sphere at infinity that they induce.
//!
//! Through every point `z` of the complex sphere pass two complex lines
//! `z + c eta_+-(z)` contained in the sphere. `phi_map` sends a real point to
//! the point at infinity of its `+` or `-` line; `psi_map` is the inverse,
//! sending a point at infinity to the unique real point of its line.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{embed_complex, reduce_angle, Complex3, SpherePoint, XiPoint};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which of the two families of characteristic lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Plus,
    Minus,
}

impl Family {
    pub fn sign(self) -> f64 {
        match self {
            Family::Plus => 1.0,
            Family::Minus => -1.0,
        }
    }

    pub fn other(self) -> Family {
        match self {
            Family::Plus => Family::Minus,
            Family::Minus => Family::Plus,
        }
    }
}

/// The two null directions through a point of the complex sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharDirectionPair {
    pub eta_plus: Complex3,
    pub eta_minus: Complex3,
    pub base: Complex3,
}

impl CharDirectionPair {
    pub fn eta(&self, family: Family) -> Complex3 {
        match family {
            Family::Plus => self.eta_plus,
            Family::Minus => self.eta_minus,
        }
    }
}

/// Null directions of the two characteristic lines through the point with
/// (possibly complex) angles `(theta, phi)`. Finite at the poles.
pub fn characteristic_directions(theta: Complex64, phi: Complex64) -> CharDirectionPair {
    let (st, ct) = (theta.sin(), theta.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    let eta = |s: f64| {
        Complex3::new(
            -I * ct * cp - s * sp,
            -I * ct * sp + s * cp,
            I * st,
        )
    };
    CharDirectionPair {
        eta_plus: eta(1.0),
        eta_minus: eta(-1.0),
        base: embed_complex(theta, phi),
    }
}

/// Strip coordinate of `Phi_+-` at complex angles, principal logarithm,
/// real part reduced to `[0, 2 pi)`.
///
/// `beta_+- = -+ i log(i exp(+-i phi) tan(theta / 2))`.
pub fn phi_beta_complex(theta: Complex64, phi: Complex64, family: Family) -> Result<Complex64> {
    let s = family.sign();
    let arg = I * (s * I * phi).exp() * (theta / 2.0).tan();
    if arg.norm() == 0.0 || !arg.re.is_finite() || !arg.im.is_finite() {
        return Err(Error::ChartOverflow(format!(
            "Phi at theta = {theta} lies at beta = +-i inf"
        )));
    }
    let b = -s * I * arg.ln();
    Ok(Complex64::new(reduce_angle(b.re), b.im))
}

/// `Phi_+-` on the real sphere. Poles go to the exact infinite points.
pub fn phi_map(x: &SpherePoint, family: Family) -> XiPoint {
    let at_np = x.theta() == 0.0;
    let at_sp = x.theta() == PI;
    match (at_np, at_sp, family) {
        (true, _, Family::Plus) | (_, true, Family::Minus) => XiPoint::plus_infinity(),
        (true, _, Family::Minus) | (_, true, Family::Plus) => XiPoint::minus_infinity(),
        _ => {
            let b = phi_beta_complex(x.theta().into(), x.phi().into(), family)
                .expect("finite for theta strictly inside (0, pi)");
            XiPoint::from_beta(b).expect("finite beta")
        }
    }
}

/// `tau_minus = exp(-i beta)` of `Phi_+-(x)`, from Cartesian coordinates.
/// `None` when the image is `beta = +i inf`.
pub fn phi_tau_minus(x: [f64; 3], family: Family) -> Option<Complex64> {
    let w = Complex64::new(x[0], -x[1]);
    match family {
        Family::Plus => {
            if 1.0 - x[2] <= 0.0 {
                None
            } else {
                Some(-I * w / (1.0 - x[2]))
            }
        }
        Family::Minus => {
            if 1.0 + x[2] <= 0.0 {
                None
            } else {
                Some(I * w / (1.0 + x[2]))
            }
        }
    }
}

/// `Psi_+-`: the real point on the characteristic line through `p`.
pub fn psi_map(p: &XiPoint, family: Family) -> SpherePoint {
    // |exp(i beta)| and Re(beta), handling the infinite points exactly
    let (modulus, re_beta) = match p.convert(crate::geometry::Chart::TauPlus) {
        Ok(q) => {
            let t = q.coordinate();
            if t.norm() == 0.0 {
                (0.0, 0.0)
            } else {
                (t.norm(), t.arg())
            }
        }
        // only beta = -i inf fails to convert
        Err(_) => (f64::INFINITY, 0.0),
    };
    let half = 2.0 * modulus.atan();
    let (theta, phi) = match family {
        Family::Plus => (half, re_beta - FRAC_PI_2),
        Family::Minus => (PI - half, re_beta + FRAC_PI_2),
    };
    SpherePoint::new(theta.clamp(0.0, PI), phi).expect("angles in range")
}

/// `Psi_+-(z) = Psi_+-(Phi_+-(z))` for complex angles.
pub fn psi_map_complex(theta: Complex64, phi: Complex64, family: Family) -> Result<SpherePoint> {
    let b = phi_beta_complex(theta, phi, family)?;
    Ok(psi_map(&XiPoint::from_beta(b)?, family))
}

/// `base + c eta`, checked to lie on a characteristic line.
pub fn line_point(base: &Complex3, eta: &Complex3, c: Complex64) -> Result<Complex3> {
    let tol = 1e-10;
    let en = eta.norm();
    if base.sphere_defect().norm() > tol {
        return Err(Error::PreconditionViolation(
            "base point is not on the complex sphere".into(),
        ));
    }
    if !(en > 0.0) || eta.dot(eta).norm() > tol * en * en {
        return Err(Error::PreconditionViolation(
            "direction is not a null vector".into(),
        ));
    }
    if base.dot(eta).norm() > tol * en * base.norm().max(1.0) {
        return Err(Error::PreconditionViolation(
            "direction is not orthogonal to the base point".into(),
        ));
    }
    Ok(*base + c * *eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{antipode, dot, embed, eta_of_beta, Chart, XI_TOL};
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn directions_at_north_pole() {
        let pair = characteristic_directions(c(0.0, 0.0), c(0.0, 0.0));
        let np = Complex3::from_real([0.0, 0.0, 1.0]);
        for fam in [Family::Plus, Family::Minus] {
            let e = pair.eta(fam);
            assert!(dot(&e, &e).norm() < 1e-15);
            assert!(dot(&np, &e).norm() < 1e-15);
            // proportional to (+-1, i, 0)
            let reference = Complex3::new(c(fam.sign(), 0.0), c(0.0, 1.0), c(0.0, 0.0));
            let ratio = e.z1 / reference.z1;
            assert!((e.z2 - ratio * reference.z2).norm() < 1e-15);
            assert!(e.z3.norm() < 1e-15);
        }
    }

    #[test]
    fn directions_on_equator() {
        let pair = characteristic_directions(c(PI / 2.0, 0.0), c(0.0, 0.0));
        let x = Complex3::from_real([1.0, 0.0, 0.0]);
        let expect_plus = Complex3::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
        let expect_minus = Complex3::new(c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0));
        assert!((pair.eta_plus - expect_plus).norm() < 1e-15);
        assert!((pair.eta_minus - expect_minus).norm() < 1e-15);
        for e in [pair.eta_plus, pair.eta_minus] {
            assert!(dot(&e, &e).norm() < 1e-15);
            assert!(dot(&x, &e).norm() < 1e-15);
        }
    }

    #[test]
    fn directions_orthogonal_to_base_for_complex_angles() {
        for (t, p) in [(c(0.3, 0.2), c(1.1, -0.4)), (c(2.0, -0.5), c(-3.0, 0.7))] {
            let pair = characteristic_directions(t, p);
            for e in [pair.eta_plus, pair.eta_minus] {
                assert!(dot(&pair.base, &e).norm() < 1e-12);
                assert!(dot(&e, &e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn phi_map_poles_are_exact() {
        let np = SpherePoint::NORTH_POLE;
        let sp = SpherePoint::SOUTH_POLE;
        assert_eq!(phi_map(&np, Family::Plus), XiPoint::plus_infinity());
        assert_eq!(phi_map(&np, Family::Minus), XiPoint::minus_infinity());
        assert_eq!(phi_map(&sp, Family::Plus), XiPoint::minus_infinity());
        assert_eq!(phi_map(&sp, Family::Minus), XiPoint::plus_infinity());
    }

    #[test]
    fn phi_map_equator_point() {
        let x = SpherePoint::new(PI / 2.0, 0.0).unwrap();
        let b = phi_map(&x, Family::Plus).beta().unwrap();
        assert!((b - c(PI / 2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phi_minus_of_antipode_is_phi_plus() {
        let x = SpherePoint::new(1.1, 0.4).unwrap();
        let bp = phi_map(&x, Family::Plus);
        let bm = phi_map(&antipode(&x), Family::Minus);
        assert!(bm.same_point(&bp, 1e-12));
    }

    #[test]
    fn psi_map_examples() {
        let p = XiPoint::from_beta(c(PI / 2.0, 0.0)).unwrap();
        let x = psi_map(&p, Family::Plus);
        assert!((x.theta() - PI / 2.0).abs() < 1e-15 && x.phi().abs() < 1e-15);

        for re in [0.0, 1.0, 2.5, 6.0] {
            let x = psi_map(&XiPoint::from_beta(c(re, 0.0)).unwrap(), Family::Plus);
            assert!((x.theta() - PI / 2.0).abs() < 1e-15);
        }

        let p = XiPoint::from_beta(c(0.0, 3.0f64.ln())).unwrap();
        let x = psi_map(&p, Family::Plus);
        assert!((x.theta() - 2.0 * (1.0f64 / 3.0).atan()).abs() < 1e-15);
        assert!((x.phi() - 1.5 * PI).abs() < 1e-15);
        let x = psi_map(&p, Family::Minus);
        assert!((x.theta() - (PI - 2.0 * (1.0f64 / 3.0).atan())).abs() < 1e-15);
    }

    #[test]
    fn psi_map_infinite_points_are_poles() {
        let plus = XiPoint::plus_infinity();
        let minus = XiPoint::minus_infinity();
        assert_eq!(psi_map(&plus, Family::Plus), SpherePoint::NORTH_POLE);
        assert_eq!(psi_map(&plus, Family::Minus), SpherePoint::SOUTH_POLE);
        assert_eq!(psi_map(&minus, Family::Plus), SpherePoint::SOUTH_POLE);
        assert_eq!(psi_map(&minus, Family::Minus), SpherePoint::NORTH_POLE);
    }

    #[test]
    fn tau_of_phi_matches_chart_conversion() {
        let x = SpherePoint::new(2.1, 5.0).unwrap();
        for fam in [Family::Plus, Family::Minus] {
            let t = phi_tau_minus(x.to_cartesian(), fam).unwrap();
            let via = phi_map(&x, fam).convert(Chart::TauMinus).unwrap().coordinate();
            assert!((t - via).norm() < 1e-14);
        }
        assert!(phi_tau_minus([0.0, 0.0, 1.0], Family::Plus).is_none());
        assert_eq!(
            phi_tau_minus([0.0, 0.0, 1.0], Family::Minus),
            Some(c(0.0, 0.0))
        );
    }

    #[test]
    fn line_point_examples() {
        let np = Complex3::from_real([0.0, 0.0, 1.0]);
        let eta = Complex3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0));
        assert_eq!(line_point(&np, &eta, c(0.0, 0.0)).unwrap(), np);
        let z = line_point(&np, &eta, c(1.0, 0.0)).unwrap();
        assert_eq!(z, Complex3::new(c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)));
        assert!(z.sphere_defect().norm() < 1e-15);

        let bad = Complex3::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(line_point(&np, &bad, c(1.0, 0.0)).is_err());
        let off = Complex3::from_real([0.0, 0.5, 0.5]);
        assert!(line_point(&off, &eta, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn incidence_on_grid() {
        for i in 1..40 {
            for j in 0..40 {
                let x = SpherePoint::new(PI * i as f64 / 40.0, TAU * j as f64 / 40.0).unwrap();
                for fam in [Family::Plus, Family::Minus] {
                    let b = phi_map(&x, fam).beta().unwrap();
                    let e = eta_of_beta(b).unwrap();
                    let r = dot(&embed(&x), &e).norm() / e.norm();
                    assert!(r <= 1e-10, "incidence {r} at {x:?}");
                }
            }
        }
    }

    #[test]
    fn inverse_property_spot_checks() {
        let x = SpherePoint::new(0.37, 4.4).unwrap();
        for fam in [Family::Plus, Family::Minus] {
            let back = psi_map(&phi_map(&x, fam), fam);
            assert!(back.angle_to(&x) < 1e-12);
        }
        let p = XiPoint::from_beta(c(5.0, -1.3)).unwrap();
        for fam in [Family::Plus, Family::Minus] {
            let q = phi_map(&psi_map(&p, fam), fam);
            assert!(q.same_point(&p, XI_TOL));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn hyperplane_property(tr in 0.1..3.0f64, ti in -0.5..0.5f64, pr in 0.0..TAU, pi_ in -0.5..0.5f64,
                                   cr in -3.0..3.0f64, ci in -3.0..3.0f64) {
                let pair = characteristic_directions(c(tr, ti), c(pr, pi_));
                for fam in [Family::Plus, Family::Minus] {
                    let z = line_point(&pair.base, &pair.eta(fam), c(cr, ci)).unwrap();
                    prop_assert!((z.dot(&pair.base) - 1.0).norm() <= 1e-12 * (1.0 + z.norm()));
                    prop_assert!(z.sphere_defect().norm() <= 1e-12 * (1.0 + z.norm().powi(2)));
                }
            }
        }
    }
}
