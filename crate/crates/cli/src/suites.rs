use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use spherewave::characteristics::{phi_map, psi_map, Family};
use spherewave::contour::{beta_form_in_chart, residue_probe, Contour, QuadratureControl};
use spherewave::geometry::{antipode, embed_complex, Chart, Complex3, SpherePoint, XiPoint};
use spherewave::green::{
    green_closed, green_closed_complex, green_pw, green_pw_general, membership, pullback_pair,
    source_form, DomainId, GreenProblem, SlidingSystem, SINGULAR_MARGIN,
};
use spherewave::planar::{planar_closed, planar_pw, PlanarProblem};
use spherewave::plane_waves::{
    evaluate, evaluate_complex, evaluate_tracked, BranchState, PlaneWaveKind, PlaneWaveSpec,
};
use spherewave::special::{legendre_p, legendre_p_integral, legendre_p_series, Degree, SeriesControl};
use spherewave::verification::{clbo_affine_residual, lbo_residual, StencilControl};
use spherewave::Result;

use crate::{Failure, VerifyArgs, SCHEMA};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Representation,
    Sliding,
    Coverage,
    Maps,
    Residues,
    Monodromy,
    Pde,
    Reciprocity,
    Legendre,
    Planar,
}

impl Suite {
    const ORDER: [Suite; 10] = [
        Suite::Representation,
        Suite::Sliding,
        Suite::Coverage,
        Suite::Maps,
        Suite::Residues,
        Suite::Monodromy,
        Suite::Pde,
        Suite::Reciprocity,
        Suite::Legendre,
        Suite::Planar,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Representation => "representation",
            Suite::Sliding => "sliding",
            Suite::Coverage => "coverage",
            Suite::Maps => "maps",
            Suite::Residues => "residues",
            Suite::Monodromy => "monodromy",
            Suite::Pde => "pde",
            Suite::Reciprocity => "reciprocity",
            Suite::Legendre => "legendre",
            Suite::Planar => "planar",
        }
    }

    fn default_tolerance(self) -> f64 {
        match self {
            Suite::Coverage => 1e-7,
            Suite::Maps | Suite::Residues | Suite::Legendre => 1e-10,
            Suite::Pde => 0.4,
            Suite::Planar => 1e-6,
            _ => 1e-8,
        }
    }

    fn offset(self) -> u64 {
        Suite::ORDER.iter().position(|&s| s == self).unwrap_or(0) as u64
    }
}

/// Largest residual of a suite and how many probes produced it.
struct Measured {
    residual: f64,
    points: usize,
}

fn lambda_grid() -> Vec<Degree> {
    [(0.5, 0.0), (-0.7, 0.5), (1.4, -0.5), (0.3, 0.2)]
        .iter()
        .map(|&(re, im)| Degree::from_parts(re, im).expect("grid avoids integers"))
        .collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn uniform_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    let z: f64 = rng.gen_range(-1.0..1.0);
    SpherePoint::new(z.acos(), rng.gen_range(0.0..TAU)).expect("valid angles")
}

fn max_of(values: Result<Vec<f64>>) -> Result<Measured> {
    let values = values?;
    Ok(Measured {
        residual: values.iter().cloned().fold(0.0, f64::max),
        points: values.len(),
    })
}

fn representation(rng: &mut ChaCha8Rng) -> Result<Measured> {
    let sys = SlidingSystem::default();
    let m1 = DomainId::new(1)?;
    let mut cases = Vec::new();
    for lam in lambda_grid() {
        for _ in 0..50 {
            let x = SpherePoint::new(rng.gen_range(FRAC_PI_2 + 0.05..PI), rng.gen_range(0.0..TAU))?;
            cases.push((lam, x));
        }
    }
    max_of(
        cases
            .par_iter()
            .map(|(lam, x)| {
                let prob = GreenProblem::north(*lam);
                Ok(rel(green_pw(&prob, x, m1, &sys)?.value, green_closed(&prob, x)?))
            })
            .collect(),
    )
}

fn sliding(rng: &mut ChaCha8Rng) -> Result<Measured> {
    let sys = SlidingSystem::default();
    let prob = GreenProblem::north(Degree::from_parts(0.3, 0.2)?);
    let mut cases = Vec::new();
    for a in 1..=5usize {
        for b in a + 1..=5 {
            let (ma, mb) = (DomainId::new(a)?, DomainId::new(b)?);
            let mut found = 0;
            let mut tries = 0;
            while found < 20 && tries < 200_000 {
                tries += 1;
                let x = uniform_point(rng);
                let members = membership(&x, sys.delta());
                if members.contains(&ma)
                    && members.contains(&mb)
                    && sys.singular_distance(&x, ma) >= SINGULAR_MARGIN
                    && sys.singular_distance(&x, mb) >= SINGULAR_MARGIN
                {
                    cases.push((ma, mb, x));
                    found += 1;
                }
            }
        }
    }
    max_of(
        cases
            .par_iter()
            .map(|(ma, mb, x)| {
                Ok(rel(green_pw(&prob, x, *ma, &sys)?.value, green_pw(&prob, x, *mb, &sys)?.value))
            })
            .collect(),
    )
}

fn coverage() -> Result<Measured> {
    let sys = SlidingSystem::default();
    let prob = GreenProblem::north(Degree::from_parts(0.3, 0.2)?);
    let cap = sys.cap();
    let n = 60;
    let grid: Vec<SpherePoint> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let theta = cap + (PI - cap) * (i as f64 + 0.5) / n as f64;
            SpherePoint::new(theta, TAU * j as f64 / n as f64)
        })
        .collect::<Result<_>>()?;
    if grid.iter().any(|x| membership(x, sys.delta()).is_empty()) {
        return Ok(Measured {
            residual: f64::INFINITY,
            points: grid.len(),
        });
    }
    max_of(
        grid.par_iter()
            .filter(|x| x.angle_to(&prob.source) >= 0.05)
            .map(|x| Ok(rel(green_pw_general(&prob, x, &sys)?.value, green_closed(&prob, x)?)))
            .collect(),
    )
}

fn strip_difference(a: Complex64, b: Complex64) -> f64 {
    let d = a - b;
    Complex64::new((d.re + PI).rem_euclid(TAU) - PI, d.im).norm()
}

fn maps() -> Result<Measured> {
    let n = 100;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = SpherePoint::new(PI * (i as f64 + 0.5) / n as f64, TAU * j as f64 / n as f64)?;
            let beta = Complex64::new(
                -PI + TAU * j as f64 / n as f64,
                -3.0 + 6.0 * (i as f64 + 0.5) / n as f64,
            );
            let p = XiPoint::from_beta(beta)?;
            for family in [Family::Plus, Family::Minus] {
                worst = worst.max(psi_map(&phi_map(&x, family), family).angle_to(&x));
                worst = worst.max(strip_difference(phi_map(&psi_map(&p, family), family).beta()?, beta));
            }
            let a = phi_map(&antipode(&x), Family::Plus).beta()?;
            let b = phi_map(&x, Family::Minus).beta()?;
            worst = worst.max(strip_difference(a, b));
        }
    }
    Ok(Measured {
        residual: worst,
        points: n * n,
    })
}

fn residues() -> Result<Measured> {
    let i = Complex64::new(0.0, 1.0);
    let one = |_: Complex64| Ok(Complex64::new(1.0, 0.0));
    let zero = Complex64::new(0.0, 0.0);
    let at_minus = residue_probe(beta_form_in_chart(one, Chart::TauMinus), &XiPoint::tau_minus(zero), 0.5)?;
    let at_plus = residue_probe(beta_form_in_chart(one, Chart::TauPlus), &XiPoint::tau_plus(zero), 0.5)?;
    let mut worst = (at_minus - i).norm().max((at_plus + i).norm());
    for (theta, phi) in [(2.1, 0.7), (1.3, 4.0), (2.8, 2.2)] {
        let x = SpherePoint::new(theta, phi)?;
        let tm = phi_map(&x, Family::Minus).tau_minus_value().expect("finite for interior points");
        let tp = phi_map(&x, Family::Plus).tau_minus_value().expect("finite for interior points");
        let r = 0.25 * (tm - tp).norm();
        let a = residue_probe(|t| source_form(t, &x), &XiPoint::tau_minus(tm), r)?;
        let b = residue_probe(|t| source_form(t, &x), &XiPoint::tau_minus(tp), r)?;
        worst = worst.max((a - i).norm()).max((b + i).norm());
    }
    Ok(Measured {
        residual: worst,
        points: 8,
    })
}

fn monodromy(rng: &mut ChaCha8Rng) -> Result<Measured> {
    let i = Complex64::new(0.0, 1.0);
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for lam in lambda_grid() {
        for _ in 0..5 {
            let x = SpherePoint::new(rng.gen_range(0.4..2.7), rng.gen_range(0.0..TAU))?;
            let center = phi_map(&x, Family::Plus).beta()?;
            let around = Contour::circle(center, 0.05, Chart::BetaStrip);
            for kind in [PlaneWaveKind::W2, PlaneWaveKind::W1] {
                let spec = PlaneWaveSpec::new(kind, lam, SpherePoint::SOUTH_POLE);
                let v = evaluate_tracked(&spec, &x, &around, 64, &mut BranchState::new())?;
                let want = match kind {
                    PlaneWaveKind::W2 => (TAU * i * lam.value()).exp(),
                    PlaneWaveKind::W1 => (-TAU * i * (1.0 + lam.value())).exp(),
                };
                worst = worst.max(rel(v[v.len() - 1] / v[0], want));
                points += 1;
            }
        }
    }
    Ok(Measured {
        residual: worst,
        points,
    })
}

/// `|r(h)/r(h/2) - 4|` from `h = 0.005`; `None` when `r(h)` is already at
/// the round-off floor.
fn order_defect<F: Fn(&StencilControl) -> Result<Complex64>>(residual: F, scale: f64) -> Result<Option<f64>> {
    let h = StencilControl::new(0.005)?;
    let coarse = residual(&h)?.norm();
    if coarse < 100.0 * f64::EPSILON * scale.max(1.0) / (h.h * h.h) {
        return Ok(None);
    }
    Ok(Some((coarse / residual(&h.halved())?.norm() - 4.0).abs()))
}

fn pde(rng: &mut ChaCha8Rng) -> Result<Measured> {
    let lams = lambda_grid();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    let mut k = 0usize;
    while points < 400 {
        let lam = lams[k % lams.len()];
        let kind = if k % 2 == 0 { PlaneWaveKind::W2 } else { PlaneWaveKind::W1 };
        let spec = PlaneWaveSpec::new(kind, lam, SpherePoint::SOUTH_POLE);
        let p = XiPoint::from_beta(Complex64::new(rng.gen_range(-PI..PI), 0.0))?;
        let (theta, phi) = (rng.gen_range(FRAC_PI_2 + 0.2..PI - 0.3), rng.gen_range(0.0..TAU));
        let (a, b) = (rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
        let tg = rng.gen_range(0.3..FRAC_PI_2 - 0.2);
        let tg = if rng.gen_bool(0.5) { tg } else { PI - tg };
        let pg = rng.gen_range(0.0..TAU);
        let (ag, bg) = (rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
        k += 1;

        let x = SpherePoint::new(theta, phi)?;
        let z = embed_complex(Complex64::new(theta, a), Complex64::new(phi, b));
        let prob = GreenProblem::north(lam);
        let xg = SpherePoint::new(tg, pg)?;
        let zg = embed_complex(Complex64::new(tg, ag), Complex64::new(pg, bg));

        let wave = |y: &SpherePoint| evaluate(&spec, y, &p);
        let cwave = |w: &Complex3| evaluate_complex(&spec, w, &p);
        let green = |y: &SpherePoint| green_closed(&prob, y);
        let cgreen = |w: &Complex3| green_closed_complex(&prob, w);
        let defects = [
            order_defect(|c| lbo_residual(wave, &x, &lam, c), wave(&x)?.norm())?,
            order_defect(|c| clbo_affine_residual(cwave, &z, &lam, c), cwave(&z)?.norm())?,
            order_defect(|c| lbo_residual(green, &xg, &lam, c), green(&xg)?.norm())?,
            order_defect(|c| clbo_affine_residual(cgreen, &zg, &lam, c), cgreen(&zg)?.norm())?,
        ];
        for d in defects.into_iter().flatten() {
            worst = worst.max(d);
            points += 1;
        }
    }
    let lam = lams[3];
    let z = embed_complex(Complex64::new(2.0, 0.0), Complex64::new(0.4, 0.0));
    for h in [1e-3, 5e-4] {
        let r = clbo_affine_residual(|w| Ok(w.z1), &z, &lam, &StencilControl::new(h)?)?;
        if r.norm() <= 1e-2 {
            worst = f64::INFINITY;
        }
    }
    Ok(Measured {
        residual: worst,
        points,
    })
}

fn reciprocity(rng: &mut ChaCha8Rng) -> Result<Measured> {
    let sys = SlidingSystem::default();
    let lams = lambda_grid();
    let mut configs = Vec::new();
    while configs.len() < 50 {
        let lam = lams[configs.len() % lams.len()];
        let x = uniform_point(rng);
        let x0 = uniform_point(rng);
        if x.angle_to(&x0) >= 0.3 {
            configs.push((lam, x, x0));
        }
    }
    let mut values: Vec<f64> = configs
        .par_iter()
        .map(|(lam, x, x0)| {
            let forward = green_pw_general(&GreenProblem::new(*lam, *x0), x, &sys)?.value;
            let backward = green_pw_general(&GreenProblem::new(*lam, *x), x0, &sys)?.value;
            let q = -x.to_cartesian().iter().zip(x0.to_cartesian()).map(|(a, b)| a * b).sum::<f64>();
            let symmetry = rel(legendre_p(&lam.reflected(), q)?, legendre_p(lam, q)?);
            Ok(rel(forward, backward).max(symmetry))
        })
        .collect::<Result<_>>()?;
    let ctrl = QuadratureControl::new(1e-12, 20)?;
    for k in 0..10 {
        let x = SpherePoint::new(rng.gen_range(FRAC_PI_2 + 0.2..PI - 0.2), rng.gen_range(0.0..TAU))?;
        let (lhs, rhs) = pullback_pair(lams[k % lams.len()], &x, &ctrl)?;
        values.push(rel(rhs, lhs));
    }
    max_of(Ok(values))
}

fn legendre() -> Result<Measured> {
    let quad = QuadratureControl::new(1e-13, 24)?;
    let series = SeriesControl::default();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for lam in lambda_grid() {
        for k in 0..40 {
            let q = 0.05 + 0.95 * (k as f64 + 1.0) / 40.0;
            let a = legendre_p_integral(&lam, q, &quad)?;
            let b = legendre_p_series(&lam, q, &series)?;
            worst = worst.max(rel(a, b));
            points += 1;
        }
        worst = worst.max((legendre_p_series(&lam, 1.0, &series)? - 1.0).norm());
    }
    Ok(Measured {
        residual: worst,
        points,
    })
}

fn planar(rng: &mut ChaCha8Rng) -> Result<Measured> {
    let ctrl = QuadratureControl::default();
    let margin = 0.05;
    let mut cases = Vec::new();
    for m in 1..=4usize {
        let center = (m as f64 - 1.0) * FRAC_PI_2;
        for _ in 0..30 {
            let r = rng.gen_range(0.5..5.0);
            let a = center + rng.gen_range(-FRAC_PI_2 + margin..FRAC_PI_2 - margin);
            cases.push((m, None, PlanarProblem::new(1.0, r * a.cos(), r * a.sin())?));
        }
        let n = m % 4 + 1;
        let center = (m as f64 - 0.5) * FRAC_PI_2;
        for _ in 0..30 {
            let r = rng.gen_range(0.5..5.0);
            let a = center + rng.gen_range(-0.25 * PI + margin..0.25 * PI - margin);
            cases.push((m, Some(n), PlanarProblem::new(1.0, r * a.cos(), r * a.sin())?));
        }
    }
    max_of(
        cases
            .par_iter()
            .map(|(m, n, p)| {
                let v = planar_pw(p, *m, &ctrl)?;
                let reference = match n {
                    Some(n) => planar_pw(p, *n, &ctrl)?,
                    None => planar_closed(p)?,
                };
                Ok(rel(v, reference))
            })
            .collect(),
    )
}

fn run(suite: Suite, seed: u64) -> Result<Measured> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(suite.offset()));
    match suite {
        Suite::All => unreachable!("expanded by the caller"),
        Suite::Representation => representation(&mut rng),
        Suite::Sliding => sliding(&mut rng),
        Suite::Coverage => coverage(),
        Suite::Maps => maps(),
        Suite::Residues => residues(),
        Suite::Monodromy => monodromy(&mut rng),
        Suite::Pde => pde(&mut rng),
        Suite::Reciprocity => reciprocity(&mut rng),
        Suite::Legendre => legendre(),
        Suite::Planar => planar(&mut rng),
    }
}

pub fn verify(a: &VerifyArgs) -> std::result::Result<Value, Failure> {
    if let Some(t) = a.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Usage(spherewave::Error::PreconditionViolation(format!(
                "tolerance must be positive, got {t}"
            ))));
        }
    }
    let selected: Vec<Suite> = match a.suite {
        Suite::All => Suite::ORDER.to_vec(),
        s => vec![s],
    };
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    for suite in selected {
        let tolerance = a.tol.unwrap_or_else(|| suite.default_tolerance());
        let start = Instant::now();
        let outcome = run(suite, a.seed);
        let seconds = start.elapsed().as_secs_f64();
        let mut report = match &outcome {
            Ok(m) => json!({
                "suite": suite.name(),
                "pass": m.residual <= tolerance,
                "max_residual": m.residual,
                "tolerance": tolerance,
                "points": m.points,
            }),
            Err(e) => json!({
                "suite": suite.name(),
                "pass": false,
                "tolerance": tolerance,
                "error": { "kind": e.kind(), "message": e.to_string() },
            }),
        };
        if a.timing {
            report["seconds"] = json!(seconds);
        }
        if report["pass"] != json!(true) {
            failed.push(suite.name());
        }
        reports.push(report);
    }
    let record = json!({
        "schema": SCHEMA,
        "command": "verify",
        "seed": a.seed,
        "pass": failed.is_empty(),
        "failed": failed,
        "suites": reports,
    });
    if failed.is_empty() {
        Ok(record)
    } else {
        eprintln!("failing suites: {}", failed.join(", "));
        Err(Failure::Run(record))
    }
}
