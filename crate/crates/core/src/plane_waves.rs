//! The plane waves `w1 = (-i (x . eta)/(x_ref . eta))^(-1-lambda)` and
//! `w2 = (...)^lambda`.
//!
//! The branch is pinned at the reference point, where `w1 = e^{i pi (lambda+1)/2}`
//! and `w2 = e^{-i pi lambda/2}`, and continued along the great arc from
//! `x_ref` to `x`. In a frame where `x_ref` is the south pole the continued
//! logarithm of the ratio has the closed form
//!
//! ```text
//! L = -i pi/2 + ln((1 - x3)/2) + Log(1 + i tau z/(1 - x3)) + Log(1 + i zbar/((1 - x3) tau))
//! ```
//!
//! with `z = x1 + i x2`, `zbar = x1 - i x2` and `tau` the `tau_-` coordinate
//! of the direction. Each principal logarithm is taken of a quantity that
//! moves along a straight ray from `1` as the point slides along the arc, so
//! the formula is the continuation itself. [`evaluate_tracked`] follows the
//! phase numerically along arbitrary paths instead, which is what exhibits
//! the monodromy around the branch points.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contour::{Contour, TrackedIntegrand};
use crate::error::{Error, Result};
use crate::geometry::{embed, rotation_taking, Chart, Complex3, Rotation3, SpherePoint, XiPoint};
use crate::special::Degree;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Proximity guard on the normalized dot products.
pub const SINGULARITY_GUARD: f64 = 1e-13;

/// Largest phase increment accepted between consecutive samples.
pub const UNWRAP_LIMIT: f64 = FRAC_PI_2;

/// Maximum number of bisections when a phase step is too large.
pub const MAX_REFINEMENT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlaneWaveKind {
    W1,
    W2,
}

/// A plane-wave family with fixed degree and reference point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveSpec {
    kind: PlaneWaveKind,
    lambda: Degree,
    x_ref: SpherePoint,
    frame: Rotation3,
}

impl PlaneWaveSpec {
    pub fn new(kind: PlaneWaveKind, lambda: Degree, x_ref: SpherePoint) -> Self {
        PlaneWaveSpec {
            kind,
            lambda,
            x_ref,
            frame: rotation_taking(&x_ref, &SpherePoint::SOUTH_POLE),
        }
    }

    pub fn kind(&self) -> PlaneWaveKind {
        self.kind
    }

    pub fn lambda(&self) -> Degree {
        self.lambda
    }

    pub fn x_ref(&self) -> SpherePoint {
        self.x_ref
    }

    /// `lambda` for `W2`, `-1 - lambda` for `W1`.
    pub fn exponent(&self) -> Complex64 {
        match self.kind {
            PlaneWaveKind::W1 => -1.0 - self.lambda.value(),
            PlaneWaveKind::W2 => self.lambda.value(),
        }
    }

    /// Rotation taking the reference point to the south pole.
    pub fn frame(&self) -> Rotation3 {
        self.frame
    }
}

/// Value at the reference point: `e^{i pi (lambda + 1)/2}` for `W1` and
/// `e^{-i pi lambda/2}` for `W2`.
pub fn plane_wave_at_ref(spec: &PlaneWaveSpec) -> Complex64 {
    (-I * FRAC_PI_2 * spec.exponent()).exp()
}

/// Continued logarithm of `-i (x . eta)/(x_ref . eta)` for a point given in
/// the frame where the reference is the south pole.
fn log_ratio_frame(x: &Complex3, eta: &Complex3) -> Result<Complex64> {
    let n = eta.norm();
    let e = eta.scale(Complex64::new(1.0 / n, 0.0));
    let xe = x.dot(&e);
    // x_ref . eta = -eta3 in this frame
    if xe.norm() < SINGULARITY_GUARD {
        return Err(Error::SingularPoint(format!("x . eta = {xe}")));
    }
    if e.z3.norm() < SINGULARITY_GUARD {
        return Err(Error::SingularPoint(format!("x_ref . eta = {}", -e.z3)));
    }
    let plus = e.z1 + I * e.z2;
    let tau = -I * e.z3 / plus;
    let one_minus = 1.0 - x.z3;
    if one_minus.norm() < 1e-14 {
        // antipode of the reference: every great arc reaches it; use the
        // principal logarithm of the ratio
        return Ok((I * xe / e.z3).ln());
    }
    let z = x.z1 + I * x.z2;
    let zbar = x.z1 - I * x.z2;
    Ok(-I * FRAC_PI_2
        + (one_minus / 2.0).ln()
        + (1.0 + I * tau * z / one_minus).ln()
        + (1.0 + I * zbar / (one_minus * tau)).ln())
}

/// Ratio `-i (x . eta)/(x_ref . eta)` itself.
fn ratio_frame(x: &Complex3, eta: &Complex3) -> Result<Complex64> {
    let n = eta.norm();
    let e = eta.scale(Complex64::new(1.0 / n, 0.0));
    let xe = x.dot(&e);
    if xe.norm() < SINGULARITY_GUARD {
        return Err(Error::SingularPoint(format!("x . eta = {xe}")));
    }
    if e.z3.norm() < SINGULARITY_GUARD {
        return Err(Error::SingularPoint(format!("x_ref . eta = {}", -e.z3)));
    }
    Ok(I * xe / e.z3)
}

/// Logarithm of the ratio on the branch of the plane waves, for any
/// representative `eta` of a point at infinity.
pub fn log_ratio(spec: &PlaneWaveSpec, x: &Complex3, eta: &Complex3) -> Result<Complex64> {
    let xr = spec.frame.apply_complex(x);
    let er = spec.frame.apply_complex(eta);
    log_ratio_frame(&xr, &er)
}

/// Plane wave at `x` for a representative null vector `eta`.
pub fn evaluate_null(spec: &PlaneWaveSpec, x: &SpherePoint, eta: &Complex3) -> Result<Complex64> {
    Ok((spec.exponent() * log_ratio(spec, &embed(x), eta)?).exp())
}

/// Plane wave at a real point for a point of the sphere at infinity.
pub fn evaluate(spec: &PlaneWaveSpec, x: &SpherePoint, p: &XiPoint) -> Result<Complex64> {
    evaluate_null(spec, x, &p.null_vector())
}

/// Plane wave with the direction given by its strip coordinate.
pub fn evaluate_beta(spec: &PlaneWaveSpec, x: &SpherePoint, beta: Complex64) -> Result<Complex64> {
    let eta = Complex3::new(beta.cos(), beta.sin(), I);
    evaluate_null(spec, x, &eta)
}

/// Complexified plane wave at a point of the complex sphere, continued
/// holomorphically from the real branch.
pub fn evaluate_complex(spec: &PlaneWaveSpec, z: &Complex3, p: &XiPoint) -> Result<Complex64> {
    Ok((spec.exponent() * log_ratio(spec, z, &p.null_vector())?).exp())
}

/// A plane wave with the observation point rotated into the reference
/// frame once, for repeated evaluation over directions.
#[derive(Debug, Clone, Copy)]
pub struct PreparedWave {
    x_frame: Complex3,
    exponent: Complex64,
    frame: Rotation3,
}

impl PreparedWave {
    pub fn new(spec: &PlaneWaveSpec, x: &SpherePoint) -> Self {
        PreparedWave {
            x_frame: spec.frame.apply_complex(&embed(x)),
            exponent: spec.exponent(),
            frame: spec.frame,
        }
    }

    pub fn at_beta(&self, beta: Complex64) -> Result<Complex64> {
        let eta = Complex3::new(beta.cos(), beta.sin(), I);
        let er = self.frame.apply_complex(&eta);
        Ok((self.exponent * log_ratio_frame(&self.x_frame, &er)?).exp())
    }
}

/// Continuously unwrapped phase of the ratio along a path.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BranchState {
    pub accumulated_phase: f64,
    pub last_argument: Complex64,
    last_coordinate: Option<Complex64>,
}

impl BranchState {
    /// A state that anchors itself on the continued branch at the first
    /// sample it sees.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_anchored(&self) -> bool {
        self.last_coordinate.is_some()
    }

    fn log_value(&self) -> Complex64 {
        Complex64::new(self.last_argument.norm().ln(), self.accumulated_phase)
    }
}

fn xi_from_chart(chart: Chart, z: Complex64) -> Result<XiPoint> {
    match chart {
        Chart::BetaStrip => XiPoint::from_beta(z),
        Chart::TauMinus => Ok(XiPoint::tau_minus(z)),
        Chart::TauPlus => Ok(XiPoint::tau_plus(z)),
    }
}

struct Tracker<'a> {
    spec: &'a PlaneWaveSpec,
    x_frame: Complex3,
    chart: Chart,
}

impl Tracker<'_> {
    fn ratio(&self, z: Complex64) -> Result<Complex64> {
        let eta = xi_from_chart(self.chart, z)?.null_vector();
        ratio_frame(&self.x_frame, &self.spec.frame.apply_complex(&eta))
    }

    fn anchor(&self, z: Complex64, state: &mut BranchState) -> Result<()> {
        let eta = xi_from_chart(self.chart, z)?.null_vector();
        let l = log_ratio_frame(&self.x_frame, &self.spec.frame.apply_complex(&eta))?;
        state.accumulated_phase = l.im;
        state.last_argument = l.exp();
        state.last_coordinate = Some(z);
        Ok(())
    }

    /// Moves along the straight chord from the last coordinate to `z`.
    fn advance(&self, z: Complex64, state: &mut BranchState) -> Result<()> {
        let Some(from) = state.last_coordinate else {
            return self.anchor(z, state);
        };
        self.step(&|s: f64| from + (z - from) * s, 0.0, 1.0, state, 0)
    }

    /// Moves along `path(s)` from `s0` to `s1`, bisecting in `s` whenever the
    /// phase of the ratio jumps by more than the unwrap limit.
    fn step(
        &self,
        path: &dyn Fn(f64) -> Complex64,
        s0: f64,
        s1: f64,
        state: &mut BranchState,
        level: usize,
    ) -> Result<()> {
        let to = path(s1);
        let r = self.ratio(to)?;
        let jump = (r / state.last_argument).arg();
        if jump.abs() <= UNWRAP_LIMIT {
            state.accumulated_phase += jump;
            state.last_argument = r;
            state.last_coordinate = Some(to);
            return Ok(());
        }
        if level >= MAX_REFINEMENT {
            return Err(Error::StepTooLarge(format!(
                "phase jump {jump} between {} and {to}",
                path(s0)
            )));
        }
        let mid = 0.5 * (s0 + s1);
        self.step(path, s0, mid, state, level + 1)?;
        self.step(path, mid, s1, state, level + 1)
    }

    fn value(&self, state: &BranchState) -> Complex64 {
        (self.spec.exponent() * state.log_value()).exp()
    }
}

/// Values along `path`, `samples_per_segment` points per segment, with the
/// phase of the ratio unwrapped continuously. An unanchored state is first
/// pinned to the continued branch at the starting point.
pub fn evaluate_tracked(
    spec: &PlaneWaveSpec,
    x: &SpherePoint,
    path: &Contour,
    samples_per_segment: usize,
    state: &mut BranchState,
) -> Result<Vec<Complex64>> {
    let tracker = Tracker {
        spec,
        x_frame: spec.frame.apply_complex(&embed(x)),
        chart: path.chart(),
    };
    let n = samples_per_segment.max(2);
    let mut out = Vec::new();
    for seg in path.segments() {
        let at = |s: f64| seg.point(s);
        let mut prev = 0.0;
        for j in 0..n {
            let s = j as f64 / (n - 1) as f64;
            if state.last_coordinate.is_none() {
                tracker.anchor(at(s), state)?;
            } else if j == 0 {
                tracker.advance(at(s), state)?;
            } else {
                tracker.step(&at, prev, s, state, 0)?;
            }
            prev = s;
            out.push(tracker.value(state));
        }
    }
    Ok(out)
}

/// Branch-tracked plane wave as a quadrature integrand over strip
/// coordinates.
pub struct TrackedWave<'a> {
    tracker: Tracker<'a>,
}

impl<'a> TrackedWave<'a> {
    pub fn new(spec: &'a PlaneWaveSpec, x: &SpherePoint, chart: Chart) -> Self {
        TrackedWave {
            tracker: Tracker {
                spec,
                x_frame: spec.frame.apply_complex(&embed(x)),
                chart,
            },
        }
    }
}

impl TrackedIntegrand for TrackedWave<'_> {
    type State = BranchState;

    fn eval(&self, z: Complex64, state: &mut BranchState) -> Result<Complex64> {
        self.tracker.advance(z, state)?;
        Ok(self.tracker.value(state))
    }
}

/// Expected monodromy factor of a positive loop around a point of
/// `Phi(x)` (`around_reference = false`) or of `Phi(x_ref)`.
pub fn monodromy_factor(spec: &PlaneWaveSpec, around_reference: bool) -> Complex64 {
    let sign = if around_reference { -1.0 } else { 1.0 };
    (sign * 2.0 * PI * I * spec.exponent()).exp()
}
