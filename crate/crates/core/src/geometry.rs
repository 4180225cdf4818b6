//! Points of the real sphere, the complex sphere and the sphere at infinity.
//!
//! The sphere at infinity is handled through three charts: the periodic
//! strip coordinate `beta` (null direction `(cos b, sin b, i)`) and the two
//! patches `tau_plus = exp(i b)`, `tau_minus = exp(-i b)` which also cover
//! the two points `beta = +i inf` and `beta = -i inf`.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Tolerance used when comparing points of the sphere at infinity.
pub const XI_TOL: f64 = 1e-10;

/// A vector of `C^3`, used for points of the complex sphere and for null
/// directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex3 {
    pub z1: Complex64,
    pub z2: Complex64,
    pub z3: Complex64,
}

impl Complex3 {
    pub const fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        Self { z1, z2, z3 }
    }

    pub fn from_real(x: [f64; 3]) -> Self {
        Self::new(x[0].into(), x[1].into(), x[2].into())
    }

    pub fn to_array(self) -> [Complex64; 3] {
        [self.z1, self.z2, self.z3]
    }

    /// Bilinear product, no conjugation.
    pub fn dot(&self, other: &Complex3) -> Complex64 {
        dot(self, other)
    }

    /// `z . z - 1`
    pub fn sphere_defect(&self) -> Complex64 {
        self.dot(self) - 1.0
    }

    pub fn is_on_sphere(&self, tol: f64) -> bool {
        self.sphere_defect().norm() <= tol
    }

    pub fn is_null(&self, tol: f64) -> bool {
        self.dot(self).norm() <= tol && self.norm() > 0.0
    }

    /// Hermitian norm.
    pub fn norm(&self) -> f64 {
        (self.z1.norm_sqr() + self.z2.norm_sqr() + self.z3.norm_sqr()).sqrt()
    }

    /// Largest imaginary component in absolute value.
    pub fn imag_norm(&self) -> f64 {
        (self.z1.im.powi(2) + self.z2.im.powi(2) + self.z3.im.powi(2)).sqrt()
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self::new(c * self.z1, c * self.z2, c * self.z3)
    }

    pub fn re(&self) -> [f64; 3] {
        [self.z1.re, self.z2.re, self.z3.re]
    }
}

impl Add for Complex3 {
    type Output = Complex3;
    fn add(self, o: Complex3) -> Complex3 {
        Complex3::new(self.z1 + o.z1, self.z2 + o.z2, self.z3 + o.z3)
    }
}

impl Sub for Complex3 {
    type Output = Complex3;
    fn sub(self, o: Complex3) -> Complex3 {
        Complex3::new(self.z1 - o.z1, self.z2 - o.z2, self.z3 - o.z3)
    }
}

impl Neg for Complex3 {
    type Output = Complex3;
    fn neg(self) -> Complex3 {
        Complex3::new(-self.z1, -self.z2, -self.z3)
    }
}

impl Mul<Complex3> for Complex64 {
    type Output = Complex3;
    fn mul(self, v: Complex3) -> Complex3 {
        v.scale(self)
    }
}

/// `a1 b1 + a2 b2 + a3 b3` without complex conjugation.
pub fn dot(a: &Complex3, b: &Complex3) -> Complex64 {
    a.z1 * b.z1 + a.z2 * b.z2 + a.z3 * b.z3
}

pub(crate) fn dot_real(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = dot_real(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// A point `(theta, phi)` of the real unit sphere.
///
/// `theta` lies in `[0, pi]`, `phi` in `[0, 2 pi)`; at the poles `phi = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    theta: f64,
    phi: f64,
}

impl SpherePoint {
    pub const NORTH_POLE: SpherePoint = SpherePoint {
        theta: 0.0,
        phi: 0.0,
    };
    pub const SOUTH_POLE: SpherePoint = SpherePoint { theta: PI, phi: 0.0 };

    /// Builds a point, reducing `phi` modulo `2 pi`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::DomainError(format!(
                "non-finite angles ({theta}, {phi})"
            )));
        }
        if !(-1e-12..=PI + 1e-12).contains(&theta) {
            return Err(Error::DomainError(format!(
                "theta = {theta} outside [0, pi]"
            )));
        }
        Ok(Self::canonical(theta.clamp(0.0, PI), phi))
    }

    fn canonical(theta: f64, phi: f64) -> Self {
        if theta == 0.0 || theta == PI {
            return Self { theta, phi: 0.0 };
        }
        Self {
            theta,
            phi: reduce_angle(phi),
        }
    }

    /// Point from Cartesian coordinates; the vector is normalised first.
    pub fn from_cartesian(x: [f64; 3]) -> Result<Self> {
        let n = dot_real(x, x).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DomainError("zero or non-finite vector".into()));
        }
        let x = [x[0] / n, x[1] / n, x[2] / n];
        let rho = x[0].hypot(x[1]);
        let theta = rho.atan2(x[2]);
        let phi = if rho == 0.0 { 0.0 } else { x[1].atan2(x[0]) };
        Ok(Self::canonical(theta, phi))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Great-circle distance.
    pub fn angle_to(&self, other: &SpherePoint) -> f64 {
        let a = self.to_cartesian();
        let b = other.to_cartesian();
        let c = cross(a, b);
        dot_real(c, c).sqrt().atan2(dot_real(a, b))
    }
}

/// Reduces an angle to `[0, 2 pi)`.
pub fn reduce_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Embeds a real sphere point into `C^3`.
pub fn embed(p: &SpherePoint) -> Complex3 {
    Complex3::from_real(p.to_cartesian())
}

/// The point `(sin t cos f, sin t sin f, cos t)` for complex angles.
pub fn embed_complex(theta: Complex64, phi: Complex64) -> Complex3 {
    let st = theta.sin();
    Complex3::new(st * phi.cos(), st * phi.sin(), theta.cos())
}

pub fn antipode(p: &SpherePoint) -> SpherePoint {
    SpherePoint::canonical(PI - p.theta, p.phi + PI)
}

/// Null direction `(cos b, sin b, i)` of the strip chart.
pub fn eta_of_beta(beta: Complex64) -> Result<Complex3> {
    if !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(Error::ChartOverflow(format!(
            "beta = {beta} is not finite; use a tau chart"
        )));
    }
    Ok(Complex3::new(beta.cos(), beta.sin(), I))
}

/// Chart of the sphere at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    BetaStrip,
    TauPlus,
    TauMinus,
}

/// A point of the sphere at infinity expressed in one chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiPoint {
    chart: Chart,
    coordinate: Complex64,
}

impl XiPoint {
    /// Strip point; `Re(beta)` is reduced to `[0, 2 pi)`.
    pub fn from_beta(beta: Complex64) -> Result<Self> {
        if !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(Error::ChartOverflow(format!("beta = {beta}")));
        }
        Ok(Self {
            chart: Chart::BetaStrip,
            coordinate: Complex64::new(reduce_angle(beta.re), beta.im),
        })
    }

    pub fn tau_plus(tau: Complex64) -> Self {
        Self {
            chart: Chart::TauPlus,
            coordinate: tau,
        }
    }

    pub fn tau_minus(tau: Complex64) -> Self {
        Self {
            chart: Chart::TauMinus,
            coordinate: tau,
        }
    }

    /// `beta = +i inf`
    pub fn plus_infinity() -> Self {
        Self::tau_plus(Complex64::new(0.0, 0.0))
    }

    /// `beta = -i inf`
    pub fn minus_infinity() -> Self {
        Self::tau_minus(Complex64::new(0.0, 0.0))
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn coordinate(&self) -> Complex64 {
        self.coordinate
    }

    pub fn is_infinite(&self) -> bool {
        self.chart != Chart::BetaStrip && self.coordinate == Complex64::new(0.0, 0.0)
    }

    /// Strip coordinate, if the point is finite.
    pub fn beta(&self) -> Result<Complex64> {
        Ok(self.convert(Chart::BetaStrip)?.coordinate)
    }

    /// Re-expresses the point in `target`.
    pub fn convert(&self, target: Chart) -> Result<XiPoint> {
        use Chart::*;
        let c = self.coordinate;
        let zero = Complex64::new(0.0, 0.0);
        match (self.chart, target) {
            (a, b) if a == b => Ok(*self),
            (BetaStrip, TauPlus) => Ok(Self::tau_plus((I * c).exp())),
            (BetaStrip, TauMinus) => Ok(Self::tau_minus((-I * c).exp())),
            (TauPlus, BetaStrip) => {
                if c == zero {
                    return Err(Error::ChartOverflow("beta = +i inf".into()));
                }
                Self::from_beta(-I * c.ln())
            }
            (TauMinus, BetaStrip) => {
                if c == zero {
                    return Err(Error::ChartOverflow("beta = -i inf".into()));
                }
                Self::from_beta(I * c.ln())
            }
            (TauPlus, TauMinus) | (TauMinus, TauPlus) => {
                if c == zero {
                    return Err(Error::ChartOverflow(format!(
                        "tau = 0 in {:?} is at infinity of {target:?}",
                        self.chart
                    )));
                }
                Ok(Self {
                    chart: target,
                    coordinate: c.inv(),
                })
            }
            _ => unreachable!(),
        }
    }

    /// Value of `tau_minus = exp(-i beta)`, `None` at `beta = +i inf`.
    pub fn tau_minus_value(&self) -> Option<Complex64> {
        self.convert(Chart::TauMinus).ok().map(|p| p.coordinate)
    }

    /// A representative null vector of the class.
    pub fn null_vector(&self) -> Complex3 {
        let c = self.coordinate;
        let half = Complex64::new(0.5, 0.0);
        match self.chart {
            Chart::BetaStrip => Complex3::new(c.cos(), c.sin(), I),
            Chart::TauPlus => Complex3::new(
                half * (1.0 + c * c),
                I * half * (1.0 - c * c),
                I * c,
            ),
            Chart::TauMinus => Complex3::new(
                half * (1.0 + c * c),
                -I * half * (1.0 - c * c),
                I * c,
            ),
        }
    }

    /// Class of a null vector, in the strip chart when `|eta3|` is not
    /// negligible and in a tau chart otherwise.
    pub fn from_null_vector(eta: &Complex3) -> Result<Self> {
        let n = eta.norm();
        if !(n > 0.0) {
            return Err(Error::PreconditionViolation("zero null vector".into()));
        }
        let (a, b, c) = (eta.z1 / n, eta.z2 / n, eta.z3 / n);
        // For the tau_minus representative a + i b = 1 and a - i b = tau^2;
        // the roles swap for tau_plus. Pick the chart with |tau| <= 1.
        let plus = a + I * b;
        let minus = a - I * b;
        let p = if plus.norm() >= minus.norm() {
            Self::tau_minus(-I * c / plus)
        } else {
            Self::tau_plus(-I * c / minus)
        };
        Ok(match p.convert(Chart::BetaStrip) {
            Ok(q) if q.coordinate.im.abs() < 30.0 => q,
            _ => p,
        })
    }

    /// Equality on the sphere at infinity, modulo `2 pi` in the strip.
    pub fn same_point(&self, other: &XiPoint, tol: f64) -> bool {
        // compare in the tau chart where both are bounded
        for chart in [Chart::TauMinus, Chart::TauPlus] {
            if let (Ok(a), Ok(b)) = (self.convert(chart), other.convert(chart)) {
                if a.coordinate.norm() <= 1.0 + tol || b.coordinate.norm() <= 1.0 + tol {
                    return (a.coordinate - b.coordinate).norm() <= tol;
                }
            }
        }
        false
    }
}

/// Distance between two strip coordinates modulo `2 pi` in the real part.
pub fn beta_distance(a: Complex64, b: Complex64) -> f64 {
    let d = a - b;
    let re = (d.re + PI).rem_euclid(TAU) - PI;
    re.hypot(d.im)
}

/// A real rotation of `R^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    m: [[f64; 3]; 3],
}

impl Rotation3 {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Rodrigues rotation about a unit `axis` by `angle`.
    pub fn about_axis(axis: [f64; 3], angle: f64) -> Self {
        let k = normalize(axis);
        let (s, c) = angle.sin_cos();
        let kx = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let kk: f64 = (0..3).map(|l| kx[i][l] * kx[l][j]).sum();
                m[i][j] = if i == j { 1.0 } else { 0.0 } + s * kx[i][j] + (1.0 - c) * kk;
            }
        }
        Self { m }
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[j][i];
            }
        }
        Self { m }
    }

    pub fn compose(&self, other: &Rotation3) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|l| self.m[i][l] * other.m[l][j]).sum();
            }
        }
        Self { m }
    }

    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
            m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
        ]
    }

    pub fn apply_complex(&self, z: &Complex3) -> Complex3 {
        let m = &self.m;
        let row = |r: &[f64; 3]| r[0] * z.z1 + r[1] * z.z2 + r[2] * z.z3;
        Complex3::new(row(&m[0]), row(&m[1]), row(&m[2]))
    }

    pub fn apply_point(&self, p: &SpherePoint) -> SpherePoint {
        // from_cartesian only fails on zero vectors
        SpherePoint::from_cartesian(self.apply(p.to_cartesian())).expect("rotation of a unit vector")
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entry of `R R^T - I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let p = self.compose(&self.transpose());
        let mut worst: f64 = 0.0;
        for (i, row) in p.m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - e).abs());
            }
        }
        worst
    }
}

/// Rotation about `a x b` carrying `a` onto `b`.
///
/// For `a = b` this is the identity. For antipodal points the rotation is a
/// half turn about `normalize(a x e_k)`, `e_k` the first coordinate axis not
/// parallel to `a`.
pub fn rotation_taking(a: &SpherePoint, b: &SpherePoint) -> Rotation3 {
    let va = a.to_cartesian();
    let vb = b.to_cartesian();
    let axis = cross(va, vb);
    let s = dot_real(axis, axis).sqrt();
    let c = dot_real(va, vb);
    if s < 1e-15 {
        if c > 0.0 {
            return Rotation3::identity();
        }
        let fallback = (0..3)
            .map(|k| {
                let mut e = [0.0; 3];
                e[k] = 1.0;
                cross(va, e)
            })
            .find(|v| dot_real(*v, *v).sqrt() > 1e-8)
            .expect("some coordinate axis is not parallel to a unit vector");
        return Rotation3::about_axis(fallback, PI);
    }
    Rotation3::about_axis(axis, s.atan2(c))
}
