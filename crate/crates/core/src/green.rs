//! The Green's function of `Delta + lambda (lambda + 1)` on the whole sphere.
//!
//! The closed form is `P_lambda(-x . x0) / (4 sin pi lambda)`. The
//! plane-wave representation integrates `w2` over the sliding contours
//! `gamma^(m)` built for a source at the north pole; other sources are
//! handled by rotating the frame.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characteristics::{phi_map, phi_tau_minus, Family};
use crate::contour::{build_gamma, excluded_cap, integrate, Contour, QuadratureControl, DEFAULT_DELTA};
use crate::error::{Error, Result};
use crate::geometry::{
    antipode, embed, rotation_taking, Complex3, Rotation3, SpherePoint, XiPoint,
};
use crate::plane_waves::{evaluate, PlaneWaveKind, PlaneWaveSpec, PreparedWave};
use crate::special::{legendre_p, legendre_p_complex, Degree};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Minimum beta-distance between a contour and the singular points of the
/// integrand for the contour to be selected automatically.
pub const SINGULAR_MARGIN: f64 = 1e-3;

const SOURCE_GUARD: f64 = 1e-8;
const DISTANCE_SAMPLES: usize = 2048;

/// Degree, source and reference point of a Green's function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenProblem {
    pub lambda: Degree,
    pub source: SpherePoint,
    pub reference: SpherePoint,
}

impl GreenProblem {
    /// Source `x0` with the reference at its antipode.
    pub fn new(lambda: Degree, source: SpherePoint) -> Self {
        GreenProblem {
            lambda,
            source,
            reference: antipode(&source),
        }
    }

    /// Source at the north pole, reference at the south pole.
    pub fn north(lambda: Degree) -> Self {
        Self::new(lambda, SpherePoint::NORTH_POLE)
    }

    pub fn with_reference(mut self, reference: SpherePoint) -> Self {
        self.reference = reference;
        self
    }

    /// `A_lambda = (-i)^(-lambda) / (8 pi sin pi lambda)`.
    pub fn amplitude(&self) -> Complex64 {
        let lam = self.lambda.value();
        (I * FRAC_PI_2 * lam).exp() / (8.0 * PI * (PI * lam).sin())
    }
}

/// Index of one of the five sliding domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DomainId(u8);

impl DomainId {
    pub fn new(m: usize) -> Result<Self> {
        if (1..=5).contains(&m) {
            Ok(DomainId(m as u8))
        } else {
            Err(Error::PreconditionViolation(format!(
                "domain index must be in 1..=5, got {m}"
            )))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> [DomainId; 5] {
        [DomainId(1), DomainId(2), DomainId(3), DomainId(4), DomainId(5)]
    }

    /// Whether a Cartesian point lies in `X^(m)`.
    pub fn contains(self, x: [f64; 3], delta: f64) -> bool {
        match self.0 {
            1 => x[2] < 0.0,
            2 => x[2] < x[0] / delta,
            3 => x[2] < x[1] / delta,
            4 => x[2] < -x[0] / delta,
            _ => x[2] < -x[1] / delta,
        }
    }
}

/// The domains `X^(m)` containing `x`, in increasing order.
pub fn membership(x: &SpherePoint, delta: f64) -> Vec<DomainId> {
    let c = x.to_cartesian();
    let c = if x.theta() > FRAC_PI_2 && c[2] >= 0.0 {
        [c[0], c[1], -f64::MIN_POSITIVE]
    } else {
        c
    };
    DomainId::all()
        .into_iter()
        .filter(|d| d.contains(c, delta))
        .collect()
}

/// `P_lambda(-x . x0) / (4 sin pi lambda)`.
pub fn green_closed(prob: &GreenProblem, x: &SpherePoint) -> Result<Complex64> {
    if x.angle_to(&prob.source) < SOURCE_GUARD {
        return Err(Error::SourceCoincidence);
    }
    let q = -dot3(x.to_cartesian(), prob.source.to_cartesian());
    let lam = prob.lambda.value();
    Ok(legendre_p(&prob.lambda, q.clamp(-1.0, 1.0))? / (4.0 * (PI * lam).sin()))
}

/// Complexified Green's function at a point of the complex sphere, off the
/// characteristic lines through `x0` and `-x0` and off the cut
/// `-z . x0 <= -1`.
pub fn green_closed_complex(prob: &GreenProblem, z: &Complex3) -> Result<Complex64> {
    let q = -z.dot(&embed(&prob.source));
    if (q + 1.0).norm() < SOURCE_GUARD {
        return Err(Error::SourceCoincidence);
    }
    let lam = prob.lambda.value();
    Ok(legendre_p_complex(&prob.lambda, q)? / (4.0 * (PI * lam).sin()))
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// The five sliding contours for one `delta`, with quadrature settings.
#[derive(Debug, Clone)]
pub struct SlidingSystem {
    delta: f64,
    contours: Vec<Contour>,
    quadrature: QuadratureControl,
}

impl SlidingSystem {
    pub fn new(delta: f64, quadrature: QuadratureControl) -> Result<Self> {
        let contours = (1..=5)
            .map(|m| build_gamma(m, delta, 256))
            .collect::<Result<Vec<_>>>()?;
        Ok(SlidingSystem {
            delta,
            contours,
            quadrature,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Radius `mu = 2 delta` of the uncovered polar cap.
    pub fn cap(&self) -> f64 {
        excluded_cap(self.delta)
    }

    pub fn quadrature(&self) -> QuadratureControl {
        self.quadrature
    }

    pub fn contour(&self, m: DomainId) -> &Contour {
        &self.contours[m.index() - 1]
    }

    /// Beta-distance from `gamma^(m)` to the singular points `Phi_+-(x)` of
    /// the integrand.
    pub fn singular_distance(&self, x: &SpherePoint, m: DomainId) -> f64 {
        let mut best = f64::INFINITY;
        for family in [Family::Plus, Family::Minus] {
            if let Ok(beta) = phi_map(x, family).beta() {
                let d = if m.index() == 1 {
                    beta.im.abs()
                } else {
                    self.contour(m).distance_to(beta, DISTANCE_SAMPLES)
                };
                best = best.min(d);
            }
        }
        best
    }

    /// Smallest `m` with `x` in `X^(m)` and singular distance at least
    /// [`SINGULAR_MARGIN`].
    pub fn select(&self, x: &SpherePoint) -> Result<DomainId> {
        let members = membership(x, self.delta);
        if members.is_empty() {
            return Err(Error::NoValidDomain(format!(
                "theta = {} lies in the excluded cap of radius {}",
                x.theta(),
                self.cap()
            )));
        }
        members
            .iter()
            .copied()
            .find(|&m| self.singular_distance(x, m) >= SINGULAR_MARGIN)
            .ok_or_else(|| {
                Error::NoValidDomain(format!(
                    "every admissible contour passes within {SINGULAR_MARGIN} of Phi(x)"
                ))
            })
    }
}

impl Default for SlidingSystem {
    fn default() -> Self {
        SlidingSystem::new(DEFAULT_DELTA, QuadratureControl::default())
            .expect("default sliding system is valid")
    }
}

/// Value of a plane-wave representation with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Representation {
    pub value: Complex64,
    pub domain: DomainId,
    pub error_estimate: f64,
}

fn require_north_source(prob: &GreenProblem) -> Result<()> {
    if prob.source.theta() > 1e-12 || (PI - prob.reference.theta()) > 1e-12 {
        return Err(Error::PreconditionViolation(
            "the sliding representation needs the source at the north pole and the reference at the south pole".into(),
        ));
    }
    Ok(())
}

fn represent(
    prob: &GreenProblem,
    x: &SpherePoint,
    m: DomainId,
    sys: &SlidingSystem,
    kind: PlaneWaveKind,
) -> Result<Representation> {
    require_north_source(prob)?;
    if !membership(x, sys.delta).contains(&m) {
        return Err(Error::DomainViolation(format!(
            "theta = {}, phi = {} is not in X^({})",
            x.theta(),
            x.phi(),
            m.index()
        )));
    }
    let spec = PlaneWaveSpec::new(kind, prob.lambda, SpherePoint::SOUTH_POLE);
    let wave = PreparedWave::new(&spec, x);
    let q = integrate(|b| wave.at_beta(b), sys.contour(m), &sys.quadrature)?;
    let lam = prob.lambda.value();
    let prefactor = match kind {
        PlaneWaveKind::W2 => prob.amplitude(),
        PlaneWaveKind::W1 => {
            (-I * FRAC_PI_2 * (1.0 + lam)).exp() / (8.0 * PI * (PI * (-1.0 - lam)).sin())
        }
    };
    Ok(Representation {
        value: prefactor * q.value,
        domain: m,
        error_estimate: prefactor.norm() * q.error_estimate,
    })
}

/// `A_lambda * int_{gamma^(m)} w2(x, eta(beta); SP) d beta` for a source at
/// the north pole.
pub fn green_pw(
    prob: &GreenProblem,
    x: &SpherePoint,
    m: DomainId,
    sys: &SlidingSystem,
) -> Result<Representation> {
    represent(prob, x, m, sys, PlaneWaveKind::W2)
}

/// The same representation built from `w1` and the degree `-1 - lambda`.
pub fn green_pw_w1(
    prob: &GreenProblem,
    x: &SpherePoint,
    m: DomainId,
    sys: &SlidingSystem,
) -> Result<Representation> {
    represent(prob, x, m, sys, PlaneWaveKind::W1)
}

/// Representation for an arbitrary source: rotate the source to the north
/// pole and pick the sliding domain automatically.
pub fn green_pw_general(
    prob: &GreenProblem,
    x: &SpherePoint,
    sys: &SlidingSystem,
) -> Result<Representation> {
    if x.angle_to(&prob.source) < SOURCE_GUARD {
        return Err(Error::SourceCoincidence);
    }
    if prob.reference.angle_to(&antipode(&prob.source)) > 1e-12 {
        return Err(Error::PreconditionViolation(
            "the reference must be the antipode of the source".into(),
        ));
    }
    let rot = rotation_taking(&prob.source, &SpherePoint::NORTH_POLE);
    let xr = rot.apply_point(x);
    let m = sys.select(&xr)?;
    green_pw(&GreenProblem::north(prob.lambda), &xr, m, sys)
}

/// `Upsilon(tau) = tau_+(x) (tau - tau_-(x)) / (tau - tau_+(x))`, in the
/// `tau_-` chart, with `tau_+-(x)` the coordinates of `Phi_+-(x)`.
pub fn mobius_upsilon(tau: Complex64, x: &SpherePoint) -> Result<Complex64> {
    let (tp, tm) = upsilon_poles(x)?;
    let den = tau - tp;
    if den.norm() <= 1e-14 * (1.0 + tp.norm()) {
        return Err(Error::PoleError(format!("Upsilon at tau = {tau}")));
    }
    Ok(tp * (tau - tm) / den)
}

/// Inverse of [`mobius_upsilon`], `tau = tau_+ (s - tau_-) / (s - tau_+)`.
pub fn mobius_upsilon_inverse(s: Complex64, x: &SpherePoint) -> Result<Complex64> {
    let (tp, tm) = upsilon_poles(x)?;
    let den = s - tp;
    if den.norm() <= 1e-14 * (1.0 + tp.norm()) {
        return Err(Error::PoleError(format!("inverse Upsilon at {s}")));
    }
    Ok(tp * (s - tm) / den)
}

/// `d Upsilon / d tau`.
pub fn mobius_upsilon_derivative(tau: Complex64, x: &SpherePoint) -> Result<Complex64> {
    let (tp, tm) = upsilon_poles(x)?;
    let den = tau - tp;
    if den.norm() <= 1e-14 * (1.0 + tp.norm()) {
        return Err(Error::PoleError(format!("Upsilon at tau = {tau}")));
    }
    Ok(tp * (tm - tp) / (den * den))
}

fn upsilon_poles(x: &SpherePoint) -> Result<(Complex64, Complex64)> {
    let c = x.to_cartesian();
    match (phi_tau_minus(c, Family::Plus), phi_tau_minus(c, Family::Minus)) {
        (Some(tp), Some(tm)) => Ok((tp, tm)),
        _ => Err(Error::PreconditionViolation(format!(
            "Upsilon needs Phi(x) at finite tau, x = {c:?}"
        ))),
    }
}

/// Coefficient of the source form `Omega_x = i [1/(t - tau_-(x)) - 1/(t - tau_+(x))] dt`
/// in the `tau_-` chart. It has residue `i` at `Phi_-(x)` and `-i` at
/// `Phi_+(x)`, and reduces to `d beta` for `x` at the north pole.
pub fn source_form(t: Complex64, x: &SpherePoint) -> Result<Complex64> {
    let c = x.to_cartesian();
    let tm = phi_tau_minus(c, Family::Minus);
    let tp = phi_tau_minus(c, Family::Plus);
    let mut v = Complex64::new(0.0, 0.0);
    if let Some(tm) = tm {
        v += I / (t - tm);
    }
    if let Some(tp) = tp {
        v -= I / (t - tp);
    }
    Ok(v)
}

/// Both sides of the change of variables under `Upsilon`:
/// `int_{gamma^(1)} w2(x, beta; SP) d beta` and the integral of
/// `w2(NP, .; -x) Omega_x` over `Upsilon(gamma^(1))`, parametrized by
/// `gamma^(1)`.
pub fn pullback_pair(lambda: Degree, x: &SpherePoint, ctrl: &QuadratureControl) -> Result<(Complex64, Complex64)> {
    let g1 = build_gamma(1, DEFAULT_DELTA, 64)?;
    let near = PlaneWaveSpec::new(PlaneWaveKind::W2, lambda, SpherePoint::SOUTH_POLE);
    let wave = PreparedWave::new(&near, x);
    let lhs = integrate(|b| wave.at_beta(b), &g1, ctrl)?.value;
    let far = PlaneWaveSpec::new(PlaneWaveKind::W2, lambda, antipode(x));
    let np = SpherePoint::NORTH_POLE;
    let rhs = integrate(
        |b: Complex64| {
            let tau = (-I * b).exp();
            let t = mobius_upsilon(tau, x)?;
            let w = evaluate(&far, &np, &XiPoint::tau_minus(t))?;
            let omega = source_form(t, x)?;
            Ok(w * omega * mobius_upsilon_derivative(tau, x)? * (-I * tau))
        },
        &g1,
        ctrl,
    )?
    .value;
    Ok((lhs, rhs))
}

/// Half turn about the bisector of the north pole and `x`; it exchanges
/// them and acts on the sphere at infinity as [`mobius_upsilon`].
pub fn bisector_half_turn(x: &SpherePoint) -> Result<Rotation3> {
    let c = x.to_cartesian();
    let axis = [c[0], c[1], c[2] + 1.0];
    let n = dot3(axis, axis).sqrt();
    if n < 1e-12 {
        return Err(Error::PreconditionViolation(
            "the bisector is undefined for the south pole".into(),
        ));
    }
    Ok(Rotation3::about_axis(axis, PI))
}

/// `tau_-` coordinate of the image of a strip point under a rotation.
pub fn rotate_xi_tau(rot: &Rotation3, beta: Complex64) -> Result<Complex64> {
    let eta = Complex3::new(beta.cos(), beta.sin(), I);
    let p = XiPoint::from_null_vector(&rot.apply_complex(&eta))?;
    p.tau_minus_value()
        .ok_or_else(|| Error::ChartOverflow("image at beta = +i inf".into()))
}
