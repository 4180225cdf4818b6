//! Oriented contours on the sphere at infinity and adaptive complex
//! quadrature along them.
//!
//! A [`Contour`] is an ordered list of smooth segments, each parametrized on
//! `[0, 1]` with an analytic derivative. Integration uses a 15-point
//! Gauss-Kronrod rule with recursive bisection. Branch-tracked integrands
//! implement [`TrackedIntegrand`]; their nodes are always visited in path
//! order, and every rejected interval restarts from the state recorded at its
//! left end.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::characteristics::{phi_beta_complex, Family};
use crate::error::{Error, Result};
use crate::geometry::{Chart, XiPoint};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance and recursion limit of the adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureControl {
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        QuadratureControl {
            rel_tol: 1e-10,
            max_depth: 18,
        }
    }
}

impl QuadratureControl {
    pub fn new(rel_tol: f64, max_depth: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::PreconditionViolation(format!(
                "quadrature tolerance must be positive, got {rel_tol}"
            )));
        }
        Ok(QuadratureControl { rel_tol, max_depth })
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Parameters of the sliding contour `Phi(C)` for a great circle `C`
/// through the frame `u = (delta, 0, 1)/sqrt(1 + delta^2)`, `v = (0, 1, 0)`,
/// followed by a shift of the real part.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SlidingCurve {
    delta: f64,
    shift: f64,
    reversed: bool,
}

impl SlidingCurve {
    fn frame(&self) -> ([f64; 3], [f64; 3]) {
        let n = (1.0 + self.delta * self.delta).sqrt();
        ([self.delta / n, 0.0, 1.0 / n], [0.0, 1.0, 0.0])
    }

    fn circle_point(&self, t: f64) -> ([f64; 3], [f64; 3]) {
        let (u, v) = self.frame();
        let (s, c) = t.sin_cos();
        let x = [c * u[0] + s * v[0], c * u[1] + s * v[1], c * u[2] + s * v[2]];
        let dx = [-s * u[0] + c * v[0], -s * u[1] + c * v[1], -s * u[2] + c * v[2]];
        (x, dx)
    }

    /// `beta(t)` and `d beta / dt` for `t` in `[0, 2 pi]`.
    fn beta(&self, t: f64) -> (Complex64, Complex64) {
        let (x, dx) = self.circle_point(t);
        let rho2 = x[0] * x[0] + x[1] * x[1];
        let dc = self.delta / (1.0 + self.delta * self.delta).sqrt();
        // arg(x1 + i x2) = t + arg((dc cos t + i sin t) e^{-it}), the second
        // factor having positive real part.
        let (s, c) = t.sin_cos();
        let phi = t + (s * c * (1.0 - dc)).atan2(dc * c * c + s * s);
        let log_tan = (0.5 * rho2.ln()) - (1.0 + x[2]).ln();
        let dphi = (x[0] * dx[1] - x[1] * dx[0]) / rho2;
        let dlog = (x[0] * dx[0] + x[1] * dx[1]) / rho2 - dx[2] / (1.0 + x[2]);
        let beta = Complex64::new(FRAC_PI_2 + phi + self.shift, -log_tan);
        (beta, Complex64::new(dphi, -dlog))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Path {
    Line { start: Complex64, end: Complex64 },
    Circle { center: Complex64, radius: f64 },
    Sliding(SlidingCurve),
}

/// A smooth oriented piece of a contour, parametrized on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    path: Path,
}

impl Segment {
    pub fn line(start: Complex64, end: Complex64) -> Self {
        Segment {
            path: Path::Line { start, end },
        }
    }

    /// Positively oriented circle.
    pub fn circle(center: Complex64, radius: f64) -> Self {
        Segment {
            path: Path::Circle { center, radius },
        }
    }

    /// Point and derivative at parameter `s`.
    pub fn eval(&self, s: f64) -> (Complex64, Complex64) {
        match self.path {
            Path::Line { start, end } => (start + (end - start) * s, end - start),
            Path::Circle { center, radius } => {
                let w = Complex64::from_polar(radius, 2.0 * PI * s);
                (center + w, 2.0 * PI * I * w)
            }
            Path::Sliding(curve) => {
                let (t, sign) = if curve.reversed {
                    (2.0 * PI * (1.0 - s), -1.0)
                } else {
                    (2.0 * PI * s, 1.0)
                };
                let (b, db) = curve.beta(t);
                (b, sign * 2.0 * PI * db)
            }
        }
    }

    pub fn point(&self, s: f64) -> Complex64 {
        self.eval(s).0
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    fn shifted(&self, shift: Complex64) -> Segment {
        let path = match self.path {
            Path::Line { start, end } => Path::Line {
                start: start + shift,
                end: end + shift,
            },
            Path::Circle { center, radius } => Path::Circle {
                center: center + shift,
                radius,
            },
            Path::Sliding(mut curve) => {
                curve.shift += shift.re;
                assert!(shift.im == 0.0, "sliding contours shift along the real axis");
                Path::Sliding(curve)
            }
        };
        Segment { path }
    }

    fn reversed(&self) -> Segment {
        let path = match self.path {
            Path::Line { start, end } => Path::Line {
                start: end,
                end: start,
            },
            Path::Circle { .. } => panic!("reversing a circle segment is not supported"),
            Path::Sliding(mut curve) => {
                curve.reversed = !curve.reversed;
                Path::Sliding(curve)
            }
        };
        Segment { path }
    }
}

/// An oriented piecewise-smooth contour in one chart of the sphere at
/// infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    segments: Vec<Segment>,
    closed_on_xi: bool,
    chart: Chart,
}

impl Contour {
    pub fn new(segments: Vec<Segment>, closed_on_xi: bool, chart: Chart) -> Result<Self> {
        let c = Contour {
            segments,
            closed_on_xi,
            chart,
        };
        c.validate()?;
        Ok(c)
    }

    /// A single segment in the beta chart.
    pub fn segment(start: Complex64, end: Complex64) -> Self {
        Contour {
            segments: vec![Segment::line(start, end)],
            closed_on_xi: false,
            chart: Chart::BetaStrip,
        }
    }

    /// A polygonal path through the given beta-chart vertices.
    pub fn polyline(vertices: &[Complex64]) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::PreconditionViolation(
                "a polyline needs at least two vertices".into(),
            ));
        }
        let segments = vertices
            .windows(2)
            .map(|w| Segment::line(w[0], w[1]))
            .collect();
        Contour::new(segments, false, Chart::BetaStrip)
    }

    /// A positively oriented circle in the given chart.
    pub fn circle(center: Complex64, radius: f64, chart: Chart) -> Self {
        Contour {
            segments: vec![Segment::circle(center, radius)],
            closed_on_xi: true,
            chart,
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_closed_on_xi(&self) -> bool {
        self.closed_on_xi
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// The same contour with every point shifted by `shift`.
    pub fn shifted(&self, shift: Complex64) -> Contour {
        Contour {
            segments: self.segments.iter().map(|s| s.shifted(shift)).collect(),
            closed_on_xi: self.closed_on_xi,
            chart: self.chart,
        }
    }

    /// The contour traversed backwards.
    pub fn reversed(&self) -> Contour {
        Contour {
            segments: self.segments.iter().rev().map(|s| s.reversed()).collect(),
            closed_on_xi: self.closed_on_xi,
            chart: self.chart,
        }
    }

    pub fn start(&self) -> Complex64 {
        self.segments[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.segments[self.segments.len() - 1].end()
    }

    /// Checks segment continuity (modulo `2 pi` at the seam for contours
    /// closed on the sphere at infinity) and that derivatives do not vanish.
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::PreconditionViolation("contour has no segments".into()));
        }
        for w in self.segments.windows(2) {
            if (w[0].end() - w[1].start()).norm() > 1e-10 {
                return Err(Error::PreconditionViolation(format!(
                    "segments do not join: {} vs {}",
                    w[0].end(),
                    w[1].start()
                )));
            }
        }
        if self.closed_on_xi && !matches!(self.segments[0].path, Path::Circle { .. }) {
            let gap = self.end() - self.start();
            let gap = if self.chart == Chart::BetaStrip {
                Complex64::new(gap.re - 2.0 * PI * (gap.re / (2.0 * PI)).round(), gap.im)
            } else {
                gap
            };
            if gap.norm() > 1e-10 {
                return Err(Error::PreconditionViolation(format!(
                    "contour does not close: gap {gap}"
                )));
            }
        }
        for (k, seg) in self.segments.iter().enumerate() {
            for j in 0..64 {
                let s = j as f64 / 63.0;
                if seg.eval(s).1.norm() == 0.0 {
                    return Err(Error::PreconditionViolation(format!(
                        "segment {k} has a vanishing derivative at s = {s}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dense samples of each segment, `per_segment` points each.
    pub fn sample(&self, per_segment: usize) -> Vec<Vec<Complex64>> {
        let n = per_segment.max(2);
        self.segments
            .iter()
            .map(|seg| (0..n).map(|j| seg.point(j as f64 / (n - 1) as f64)).collect())
            .collect()
    }

    /// JSON form `{segments: [{samples: [[re, im], ...]}], closed: bool}`.
    pub fn to_json(&self, per_segment: usize) -> serde_json::Value {
        let segments: Vec<serde_json::Value> = self
            .sample(per_segment)
            .into_iter()
            .map(|pts| {
                let samples: Vec<[f64; 2]> = pts.iter().map(|z| [z.re, z.im]).collect();
                json!({ "samples": samples })
            })
            .collect();
        json!({ "segments": segments, "closed": self.closed_on_xi })
    }

    /// Net change of the real part along the contour.
    pub fn net_real_advance(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.end().re - s.start().re)
            .sum()
    }

    /// Smallest distance from the sampled contour to `p`, measured modulo
    /// `2 pi` in the real direction when the contour lives in the beta chart.
    pub fn distance_to(&self, p: Complex64, samples_per_segment: usize) -> f64 {
        let mut best = f64::INFINITY;
        for pts in self.sample(samples_per_segment) {
            for w in pts.windows(2) {
                best = best.min(segment_distance(w[0], w[1], p, self.chart == Chart::BetaStrip));
            }
        }
        best
    }
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64, periodic: bool) -> f64 {
    let mut p = p;
    if periodic {
        let mid = 0.5 * (a + b);
        let k = ((p.re - mid.re) / (2.0 * PI)).round();
        p.re -= 2.0 * PI * k;
    }
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0)
    };
    (a + ab * t - p).norm()
}

/// Integrand carrying state along the path, such as an unwrapped phase.
pub trait TrackedIntegrand {
    type State: Clone;

    /// Value at `z`, given the state at the previous node in path order.
    fn eval(&self, z: Complex64, state: &mut Self::State) -> Result<Complex64>;
}

struct Plain<F>(F);

impl<F> TrackedIntegrand for Plain<F>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    type State = ();

    fn eval(&self, z: Complex64, _: &mut ()) -> Result<Complex64> {
        (self.0)(z)
    }
}

// Gauss-Kronrod 15-point nodes on [-1, 1] in increasing order, with the
// embedded 7-point Gauss weights at the odd positions.
const GK_NODES: [f64; 15] = [
    -0.991_455_371_120_812_6,
    -0.949_107_912_342_758_5,
    -0.864_864_423_359_769_1,
    -0.741_531_185_599_394_4,
    -0.586_087_235_467_691_1,
    -0.405_845_151_377_397_2,
    -0.207_784_955_007_898_5,
    0.0,
    0.207_784_955_007_898_5,
    0.405_845_151_377_397_2,
    0.586_087_235_467_691_1,
    0.741_531_185_599_394_4,
    0.864_864_423_359_769_1,
    0.949_107_912_342_758_5,
    0.991_455_371_120_812_6,
];
const GK_KRONROD: [f64; 15] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
    0.204_432_940_075_298_9,
    0.190_350_578_064_785_4,
    0.169_004_726_639_267_9,
    0.140_653_259_715_525_92,
    0.104_790_010_322_250_18,
    0.063_092_092_629_978_55,
    0.022_935_322_010_529_225,
];
const GK_GAUSS: [f64; 15] = [
    0.0,
    0.129_484_966_168_869_7,
    0.0,
    0.279_705_391_489_276_7,
    0.0,
    0.381_830_050_505_118_9,
    0.0,
    0.417_959_183_673_469_4,
    0.0,
    0.381_830_050_505_118_9,
    0.0,
    0.279_705_391_489_276_7,
    0.0,
    0.129_484_966_168_869_7,
    0.0,
];

struct Engine<'a, T: TrackedIntegrand> {
    f: &'a T,
    ctrl: &'a QuadratureControl,
    evaluations: usize,
}

struct Panel<S> {
    value: Complex64,
    error: f64,
    roundoff_limited: bool,
    end_state: S,
}

impl<T: TrackedIntegrand> Engine<'_, T> {
    fn panel(&mut self, seg: &Segment, a: f64, b: f64, mut state: T::State) -> Result<Panel<T::State>> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut kron = Complex64::new(0.0, 0.0);
        let mut gauss = Complex64::new(0.0, 0.0);
        let mut values = [Complex64::new(0.0, 0.0); 15];
        for (j, node) in GK_NODES.iter().enumerate() {
            let (z, dz) = seg.eval(mid + half * node);
            let fz = self.f.eval(z, &mut state)?;
            if !(fz.norm() <= 1.0 / self.ctrl.rel_tol) {
                return Err(Error::SingularOnPath(format!("{z}")));
            }
            let v = fz * dz;
            values[j] = v;
            kron += GK_KRONROD[j] * v;
            gauss += GK_GAUSS[j] * v;
        }
        self.evaluations += 15;
        let mean = kron * 0.5;
        let mut resasc = 0.0;
        let mut resabs = 0.0;
        for j in 0..15 {
            resasc += GK_KRONROD[j] * (values[j] - mean).norm();
            resabs += GK_KRONROD[j] * values[j].norm();
        }
        let resasc = resasc * half.abs();
        let resabs = resabs * half.abs();
        let mut err = ((kron - gauss) * half).norm();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        let mut roundoff_limited = false;
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            let floor = 50.0 * f64::EPSILON * resabs;
            roundoff_limited = err <= floor;
            err = err.max(floor);
        }
        Ok(Panel {
            value: kron * half,
            error: err,
            roundoff_limited,
            end_state: state,
        })
    }

    fn adapt(
        &mut self,
        seg: &Segment,
        a: f64,
        b: f64,
        state: T::State,
        budget: f64,
        depth: usize,
    ) -> Result<Panel<T::State>> {
        let whole = self.panel(seg, a, b, state.clone())?;
        if whole.error <= budget * (b - a) || whole.roundoff_limited {
            return Ok(whole);
        }
        if depth >= self.ctrl.max_depth {
            return Err(Error::QuadratureNoConvergence {
                depth,
                estimate: whole.error,
            });
        }
        let m = 0.5 * (a + b);
        let left = self.adapt(seg, a, m, state, budget, depth + 1)?;
        let right = self.adapt(seg, m, b, left.end_state, budget, depth + 1)?;
        Ok(Panel {
            value: left.value + right.value,
            error: left.error + right.error,
            roundoff_limited: left.roundoff_limited && right.roundoff_limited,
            end_state: right.end_state,
        })
    }
}

fn run<T: TrackedIntegrand>(
    f: &T,
    state: T::State,
    c: &Contour,
    ctrl: &QuadratureControl,
) -> Result<(Quadrature, T::State)> {
    let mut engine = Engine {
        f,
        ctrl,
        evaluations: 0,
    };
    // A coarse pass fixes the absolute scale of the tolerance.
    let mut scale = 0.0;
    let mut probe_state = state.clone();
    for seg in &c.segments {
        let p = engine.panel(seg, 0.0, 1.0, probe_state)?;
        scale += p.value.norm();
        probe_state = p.end_state;
    }
    let budget_total = ctrl.rel_tol * (1.0 + scale);
    let budget = budget_total / c.segments.len() as f64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut state = state;
    for seg in &c.segments {
        let p = engine.adapt(seg, 0.0, 1.0, state, budget, 0)?;
        value += p.value;
        error += p.error;
        state = p.end_state;
    }
    Ok((
        Quadrature {
            value,
            error_estimate: error,
            evaluations: engine.evaluations,
        },
        state,
    ))
}

/// Adaptive integral of `f(z) dz` along the contour.
pub fn integrate<F>(f: F, c: &Contour, ctrl: &QuadratureControl) -> Result<Quadrature>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    run(&Plain(f), (), c, ctrl).map(|(q, _)| q)
}

/// Adaptive integral of a branch-tracked integrand; nodes are evaluated in
/// path order. Returns the state after the last node.
pub fn integrate_tracked<T: TrackedIntegrand>(
    f: &T,
    state: T::State,
    c: &Contour,
    ctrl: &QuadratureControl,
) -> Result<(Quadrature, T::State)> {
    run(f, state, c, ctrl)
}

/// `(1/2 pi i) * contour integral of f(tau) d tau` over the positively
/// oriented circle of the given radius about a point in a `tau` chart. `f` is
/// the coefficient of the form in that chart.
pub fn residue_probe<F>(f: F, center: &XiPoint, radius: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if center.chart() == Chart::BetaStrip {
        return Err(Error::PreconditionViolation(
            "residue probes are taken in a tau chart".into(),
        ));
    }
    if !(radius > 0.0) {
        return Err(Error::PreconditionViolation(format!(
            "probe radius must be positive, got {radius}"
        )));
    }
    let circle = Contour::circle(center.coordinate(), radius, center.chart());
    let ctrl = QuadratureControl::new(1e-13, 24)?;
    let q = integrate(f, &circle, &ctrl)?;
    Ok(q.value / (2.0 * PI * I))
}

/// Coefficient in the given `tau` chart of the one-form `g(beta) d beta`,
/// using `d beta = i d tau_- / tau_-` and `d beta = -i d tau_+ / tau_+`.
pub fn beta_form_in_chart<G>(g: G, chart: Chart) -> impl Fn(Complex64) -> Result<Complex64>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    move |tau: Complex64| match chart {
        Chart::TauMinus => {
            let beta = I * tau.ln();
            Ok(g(beta)? * I / tau)
        }
        Chart::TauPlus => {
            let beta = -I * tau.ln();
            Ok(g(beta)? * -I / tau)
        }
        Chart::BetaStrip => g(tau),
    }
}

/// Default offset of the sliding planes, `delta = mu / 2`.
pub const DEFAULT_DELTA: f64 = 0.1;

/// Radius `mu = 2 delta` of the polar cap left uncovered by the sliding
/// domains.
pub fn excluded_cap(delta: f64) -> f64 {
    2.0 * delta
}

/// Builds `gamma^(m)`: the segment `[-pi, pi]` for `m = 1`, and for
/// `m = 2..5` the image of the great circle `x3 = x1 / delta` under the
/// characteristic map, shifted by `(m - 2) pi / 2`. `samples` controls the
/// build-time incidence and closure checks.
pub fn build_gamma(m: usize, delta: f64, samples: usize) -> Result<Contour> {
    if !(1..=5).contains(&m) {
        return Err(Error::PreconditionViolation(format!(
            "contour index must be in 1..=5, got {m}"
        )));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::PreconditionViolation(format!(
            "delta must lie in (0, 0.5], got {delta}"
        )));
    }
    if samples < 64 {
        return Err(Error::PreconditionViolation(format!(
            "at least 64 samples are required, got {samples}"
        )));
    }
    if m == 1 {
        return Ok(Contour::segment(
            Complex64::new(-PI, 0.0),
            Complex64::new(PI, 0.0),
        ));
    }
    let curve = SlidingCurve {
        delta,
        shift: (m as f64 - 2.0) * FRAC_PI_2,
        reversed: false,
    };
    let forward = Contour {
        segments: vec![Segment {
            path: Path::Sliding(curve),
        }],
        closed_on_xi: true,
        chart: Chart::BetaStrip,
    };
    forward.validate()?;
    check_incidence(&forward, m, delta, samples)?;
    let advance = forward.net_real_advance();
    let winding = (advance / (2.0 * PI)).round();
    if (advance - 2.0 * PI * winding).abs() > 1e-8 {
        return Err(Error::OrientationUnresolved(format!(
            "real advance {advance} is not a multiple of 2 pi"
        )));
    }
    match winding as i64 {
        1 => Ok(forward),
        -1 => Ok(forward.reversed()),
        _ => Err(Error::OrientationUnresolved(format!(
            "contour winds {winding} times around the strip"
        ))),
    }
}

/// Unit normal of the plane of the great circle bounding `X^(m)`, `m >= 2`.
pub fn sliding_plane_normal(m: usize, delta: f64) -> [f64; 3] {
    let n = (1.0 + delta * delta).sqrt();
    match m {
        2 => [1.0 / n, 0.0, -delta / n],
        3 => [0.0, 1.0 / n, -delta / n],
        4 => [-1.0 / n, 0.0, -delta / n],
        5 => [0.0, -1.0 / n, -delta / n],
        _ => [0.0, 0.0, 1.0],
    }
}

fn check_incidence(c: &Contour, m: usize, delta: f64, samples: usize) -> Result<()> {
    let normal = sliding_plane_normal(m, delta);
    for pts in c.sample(samples) {
        for beta in pts {
            let p = XiPoint::from_beta(beta)?;
            for family in [Family::Plus, Family::Minus] {
                let x = crate::characteristics::psi_map(&p, family).to_cartesian();
                let r = x[0] * normal[0] + x[1] * normal[1] + x[2] * normal[2];
                if r.abs() > 1e-8 {
                    return Err(Error::OrientationUnresolved(format!(
                        "sample {beta} is off the circle plane by {r}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `|I(c1) - I(c2)| / (1 + |I(c1)|)`.
pub fn deform_check<F>(f: F, c1: &Contour, c2: &Contour, ctrl: &QuadratureControl) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let a = integrate(&f, c1, ctrl)?.value;
    let b = integrate(&f, c2, ctrl)?.value;
    Ok((a - b).norm() / (1.0 + a.norm()))
}

/// Beta value of `Phi_plus` for a point of the great circle of `gamma^(m)`
/// at circle parameter `t`; used by tests and plotting.
pub fn sliding_circle_point(m: usize, delta: f64, t: f64) -> Result<([f64; 3], Complex64)> {
    if !(2..=5).contains(&m) {
        return Err(Error::PreconditionViolation(format!(
            "sliding circles exist for m in 2..=5, got {m}"
        )));
    }
    let curve = SlidingCurve {
        delta,
        shift: 0.0,
        reversed: false,
    };
    let (x, _) = curve.circle_point(t);
    let rot = (m as f64 - 2.0) * FRAC_PI_2;
    let (s, c) = rot.sin_cos();
    let xr = [c * x[0] - s * x[1], s * x[0] + c * x[1], x[2]];
    let theta = Complex64::new(xr[2].clamp(-1.0, 1.0).acos(), 0.0);
    let phi = Complex64::new(xr[1].atan2(xr[0]), 0.0);
    Ok((xr, phi_beta_complex(theta, phi, Family::Plus)?))
}
