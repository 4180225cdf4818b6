//! Finite-difference residuals of the Laplace-Beltrami operator on the real
//! sphere and of its complexification in affine coordinates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Complex3, SpherePoint};
use crate::special::Degree;

/// Step of the central-difference stencils.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StencilControl {
    pub h: f64,
}

impl Default for StencilControl {
    fn default() -> Self {
        StencilControl { h: 1e-3 }
    }
}

impl StencilControl {
    pub fn new(h: f64) -> Result<Self> {
        if !(1e-6..=1e-1).contains(&h) {
            return Err(Error::PreconditionViolation(format!(
                "stencil step must lie in [1e-6, 1e-1], got {h}"
            )));
        }
        Ok(StencilControl { h })
    }

    pub fn halved(&self) -> Self {
        StencilControl { h: self.h / 2.0 }
    }
}

/// `f_thth + cot(theta) f_th + f_phph / sin^2(theta) + lambda (lambda + 1) f`
/// by second-order central differences.
pub fn lbo_residual<F>(f: F, x: &SpherePoint, lambda: &Degree, ctrl: &StencilControl) -> Result<Complex64>
where
    F: Fn(&SpherePoint) -> Result<Complex64>,
{
    let h = ctrl.h;
    let theta = x.theta();
    let phi = x.phi();
    if theta < 10.0 * h || theta > std::f64::consts::PI - 10.0 * h {
        return Err(Error::StencilTooClose(format!(
            "theta = {theta} is within 10h of a pole"
        )));
    }
    let at = |t: f64, p: f64| -> Result<Complex64> {
        let q = SpherePoint::new(t, p)?;
        f(&q).map_err(to_stencil_error)
    };
    let f0 = at(theta, phi)?;
    let ft_p = at(theta + h, phi)?;
    let ft_m = at(theta - h, phi)?;
    let fp_p = at(theta, phi + h)?;
    let fp_m = at(theta, phi - h)?;
    let f_tt = (ft_p - 2.0 * f0 + ft_m) / (h * h);
    let f_t = (ft_p - ft_m) / (2.0 * h);
    let f_pp = (fp_p - 2.0 * f0 + fp_m) / (h * h);
    let (s, c) = theta.sin_cos();
    Ok(f_tt + c / s * f_t + f_pp / (s * s) + lambda.eigen_shift() * f0)
}

fn to_stencil_error(e: Error) -> Error {
    match e {
        Error::SingularPoint(msg) => Error::StencilTooClose(msg),
        Error::SourceCoincidence => Error::StencilTooClose("stencil touches the source".into()),
        other => other,
    }
}

/// Point of the complex sphere over `(z1, z2)` on the sheet of `base`.
fn lift(base: &Complex3, z1: Complex64, z2: Complex64) -> Complex3 {
    let w = 1.0 - z1 * z1 - z2 * z2;
    let z3 = base.z3 * (w / (base.z3 * base.z3)).sqrt();
    Complex3::new(z1, z2, z3)
}

/// Complexified operator in the affine coordinates `(z1, z2)`,
/// `d11 + d22 - (z1^2 d11 + z2^2 d22 + 2 z1 z2 d12) - 2 (z1 d1 + z2 d2)`,
/// plus `lambda (lambda + 1) f`.
pub fn clbo_affine_residual<F>(
    f: F,
    z: &Complex3,
    lambda: &Degree,
    ctrl: &StencilControl,
) -> Result<Complex64>
where
    F: Fn(&Complex3) -> Result<Complex64>,
{
    if z.sphere_defect().norm() > 1e-10 {
        return Err(Error::PreconditionViolation(
            "point is not on the complex sphere".into(),
        ));
    }
    if z.z3.norm() < 0.1 {
        return Err(Error::ChartInvalid(format!("|z3| = {} < 0.1", z.z3.norm())));
    }
    let d = affine_derivatives(&f, z, Complex64::new(ctrl.h, 0.0))?;
    let (z1, z2) = (z.z1, z.z2);
    Ok(d.d11 + d.d22 - (z1 * z1 * d.d11 + z2 * z2 * d.d22 + 2.0 * z1 * z2 * d.d12)
        - 2.0 * (z1 * d.d1 + z2 * d.d2)
        + lambda.eigen_shift() * d.f)
}

struct AffineDerivatives {
    f: Complex64,
    d1: Complex64,
    d2: Complex64,
    d11: Complex64,
    d22: Complex64,
    d12: Complex64,
}

fn affine_derivatives<F>(f: &F, z: &Complex3, h: Complex64) -> Result<AffineDerivatives>
where
    F: Fn(&Complex3) -> Result<Complex64>,
{
    let g = |a: Complex64, b: Complex64| -> Result<Complex64> {
        f(&lift(z, z.z1 + a, z.z2 + b)).map_err(to_stencil_error)
    };
    let zero = Complex64::new(0.0, 0.0);
    let f0 = g(zero, zero)?;
    let f1p = g(h, zero)?;
    let f1m = g(-h, zero)?;
    let f2p = g(zero, h)?;
    let f2m = g(zero, -h)?;
    let fpp = g(h, h)?;
    let fpm = g(h, -h)?;
    let fmp = g(-h, h)?;
    let fmm = g(-h, -h)?;
    Ok(AffineDerivatives {
        f: f0,
        d1: (f1p - f1m) / (2.0 * h),
        d2: (f2p - f2m) / (2.0 * h),
        d11: (f1p - 2.0 * f0 + f1m) / (h * h),
        d22: (f2p - 2.0 * f0 + f2m) / (h * h),
        d12: (fpp - fpm - fmp + fmm) / (4.0 * h * h),
    })
}

/// Largest relative difference between first derivatives taken along the
/// real and the imaginary directions of `z1` and `z2`; small for
/// holomorphic `f`.
pub fn holomorphy_defect<F>(f: F, z: &Complex3, ctrl: &StencilControl) -> Result<f64>
where
    F: Fn(&Complex3) -> Result<Complex64>,
{
    let re = affine_derivatives(&f, z, Complex64::new(ctrl.h, 0.0))?;
    let im = affine_derivatives(&f, z, Complex64::new(0.0, ctrl.h))?;
    let scale = 1.0 + re.d1.norm().max(re.d2.norm());
    Ok(((re.d1 - im.d1).norm().max((re.d2 - im.d2).norm())) / scale)
}

/// Coefficients of the complexified operator in the coordinates
/// `(epsilon, beta)` approaching the sphere at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiCoefficientRow {
    pub eps: f64,
    /// `epsilon^4 - epsilon^2`, multiplying `d^2/d epsilon^2`
    pub second_eps: f64,
    /// `epsilon^3`, multiplying `d/d epsilon`
    pub first_eps: f64,
    /// `epsilon^2`, multiplying `d^2/d beta^2`
    pub second_beta: f64,
}

/// Table of the principal coefficients, which all vanish at `epsilon = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiSingularityReport {
    pub lambda: [f64; 2],
    pub rows: Vec<XiCoefficientRow>,
    pub degenerate_at_xi: bool,
    pub monotone: bool,
}

pub fn clbo_xi_singularity_probe(lambda: &Degree, eps_grid: &[f64]) -> Result<XiSingularityReport> {
    for &e in eps_grid {
        if !(0.0..=0.1).contains(&e) {
            return Err(Error::PreconditionViolation(format!(
                "epsilon must lie in [0, 0.1], got {e}"
            )));
        }
    }
    let row = |eps: f64| XiCoefficientRow {
        eps,
        second_eps: eps.powi(4) - eps * eps,
        first_eps: eps.powi(3),
        second_beta: eps * eps,
    };
    let rows: Vec<XiCoefficientRow> = eps_grid.iter().map(|&e| row(e)).collect();
    let at_zero = row(0.0);
    let degenerate_at_xi =
        at_zero.second_eps == 0.0 && at_zero.first_eps == 0.0 && at_zero.second_beta == 0.0;
    let mut sorted = rows.clone();
    sorted.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    let monotone = sorted.windows(2).all(|w| {
        w[0].second_eps.abs() <= w[1].second_eps.abs()
            && w[0].first_eps.abs() <= w[1].first_eps.abs()
            && w[0].second_beta.abs() <= w[1].second_beta.abs()
    });
    let lam = lambda.value();
    Ok(XiSingularityReport {
        lambda: [lam.re, lam.im],
        rows,
        degenerate_at_xi,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::embed;
    use crate::green::{green_closed, green_closed_complex, GreenProblem};
    use crate::plane_waves::{evaluate, evaluate_complex, PlaneWaveKind, PlaneWaveSpec};
    use crate::geometry::XiPoint;

    fn deg(re: f64, im: f64) -> Degree {
        Degree::from_parts(re, im).unwrap()
    }

    fn ratio<F: Fn(&StencilControl) -> Complex64>(r: F, h: f64) -> f64 {
        let a = r(&StencilControl::new(h).unwrap()).norm();
        let b = r(&StencilControl::new(h / 2.0).unwrap()).norm();
        a / b
    }

    #[test]
    fn constant_field() {
        let lam = deg(0.5, 0.0);
        let x = SpherePoint::new(1.0, 0.5).unwrap();
        let r = lbo_residual(|_| Ok(Complex64::new(2.0, 0.0)), &x, &lam, &StencilControl::default())
            .unwrap();
        assert!((r - 2.0 * 0.75).norm() < 1e-12);
    }

    #[test]
    fn plane_wave_residual_is_second_order() {
        let lam = deg(0.3, 0.2);
        let spec = PlaneWaveSpec::new(PlaneWaveKind::W2, lam, SpherePoint::SOUTH_POLE);
        let p = XiPoint::from_beta(Complex64::new(0.7, 0.4)).unwrap();
        let x = SpherePoint::new(1.9, 2.2).unwrap();
        let q = ratio(|c| lbo_residual(|y| evaluate(&spec, y, &p), &x, &lam, c).unwrap(), 0.01);
        assert!((3.6..=4.4).contains(&q), "{q}");
    }

    #[test]
    fn green_residual_is_second_order() {
        let lam = deg(-0.7, 0.5);
        let prob = GreenProblem::north(lam);
        let x = SpherePoint::new(1.3, 0.4).unwrap();
        let q = ratio(|c| lbo_residual(|y| green_closed(&prob, y), &x, &lam, c).unwrap(), 0.01);
        assert!((3.6..=4.4).contains(&q), "{q}");
    }

    #[test]
    fn stencil_guards() {
        let lam = deg(0.3, 0.0);
        let x = SpherePoint::new(0.005, 0.0).unwrap();
        assert!(matches!(
            lbo_residual(|_| Ok(Complex64::new(1.0, 0.0)), &x, &lam, &StencilControl::default()),
            Err(Error::StencilTooClose(_))
        ));
        assert!(StencilControl::new(0.5).is_err());
        assert!(StencilControl::new(1e-7).is_err());
    }

    fn complex_point() -> Complex3 {
        let theta = Complex64::new(1.2, 0.15);
        let phi = Complex64::new(0.4, -0.1);
        crate::geometry::embed_complex(theta, phi)
    }

    #[test]
    fn complexified_plane_wave() {
        let lam = deg(0.3, 0.2);
        let spec = PlaneWaveSpec::new(PlaneWaveKind::W2, lam, SpherePoint::SOUTH_POLE);
        let p = XiPoint::from_beta(Complex64::new(2.5, -0.3)).unwrap();
        let z = complex_point();
        let f = |w: &Complex3| evaluate_complex(&spec, w, &p);
        let q = ratio(|c| clbo_affine_residual(f, &z, &lam, c).unwrap(), 0.01);
        assert!((3.6..=4.4).contains(&q), "{q}");
        let d3 = holomorphy_defect(f, &z, &StencilControl::new(1e-3).unwrap()).unwrap();
        let d4 = holomorphy_defect(f, &z, &StencilControl::new(1e-4).unwrap()).unwrap();
        assert!(d4 < 1e-6);
        assert!((d3 / d4 - 100.0).abs() < 5.0, "{d3} {d4}");
    }

    #[test]
    fn complexified_green() {
        let lam = deg(0.3, 0.2);
        let prob = GreenProblem::north(lam);
        let z = complex_point();
        let f = |w: &Complex3| green_closed_complex(&prob, w);
        let q = ratio(|c| clbo_affine_residual(f, &z, &lam, c).unwrap(), 0.01);
        assert!((3.6..=4.4).contains(&q), "{q}");
        // agrees with the real Green's function on real points
        let x = SpherePoint::new(2.0, 1.0).unwrap();
        let a = green_closed(&prob, &x).unwrap();
        let b = green_closed_complex(&prob, &embed(&x)).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn negative_control() {
        let lam = deg(0.3, 0.2);
        let z = complex_point();
        for h in [1e-3, 5e-4] {
            let r = clbo_affine_residual(|w| Ok(w.z1), &z, &lam, &StencilControl::new(h).unwrap())
                .unwrap();
            assert!(r.norm() > 1e-2);
        }
    }

    #[test]
    fn chart_guard() {
        let z = Complex3::from_real([1.0, 0.0, 0.0]);
        let r = clbo_affine_residual(|w| Ok(w.z1), &z, &deg(0.3, 0.0), &StencilControl::default());
        assert!(matches!(r, Err(Error::ChartInvalid(_))));
    }

    #[test]
    fn xi_probe() {
        let rep = clbo_xi_singularity_probe(&deg(0.3, 0.2), &[0.1, 0.05, 0.01, 0.0]).unwrap();
        let r = rep.rows[0];
        assert!((r.second_eps + 0.0099).abs() < 1e-15);
        assert!((r.first_eps - 0.001).abs() < 1e-15);
        assert!((r.second_beta - 0.01).abs() < 1e-15);
        let z = rep.rows[3];
        assert_eq!((z.second_eps, z.first_eps, z.second_beta), (0.0, 0.0, 0.0));
        assert!(rep.degenerate_at_xi && rep.monotone);
        assert!(clbo_xi_singularity_probe(&deg(0.3, 0.0), &[0.2]).is_err());
    }
}
