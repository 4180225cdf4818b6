use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use spherewave::contour::{build_gamma, excluded_cap, sliding_plane_normal, QuadratureControl};
use spherewave::geometry::{rotation_taking, SpherePoint};
use spherewave::green::{green_closed, green_pw, green_pw_general, DomainId, GreenProblem, SlidingSystem};
use spherewave::planar::{planar_closed, planar_pw, PlanarProblem};
use spherewave::special::{
    legendre_p, legendre_p_complex, legendre_p_infinity, legendre_p_integral, legendre_p_series,
    Degree, SeriesControl,
};
use spherewave::Error;

use crate::{
    error_record, ContourArgs, DegreeArgs, Failure, GreenArgs, LegendreArgs, LegendreMethod,
    Output, OutputFormat, PlanarArgs, SweepArgs, SCHEMA,
};

const QUADRATURE_DEPTH: usize = 20;

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn usage<T>(r: spherewave::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Usage)
}

fn degree(d: &DegreeArgs) -> Result<Degree, Failure> {
    usage(Degree::from_parts(d.lambda[0], d.lambda[1]))
}

fn relative(a: Complex64, b: Complex64) -> (f64, f64) {
    let abs = (a - b).norm();
    (abs, abs / b.norm().max(f64::MIN_POSITIVE))
}

pub fn eval_green(a: &GreenArgs) -> Result<Value, Failure> {
    let lam = degree(&a.degree)?;
    let x = usage(SpherePoint::new(a.theta, a.phi))?;
    let x0 = usage(SpherePoint::new(a.theta0, a.phi0))?;
    let ctrl = usage(QuadratureControl::new(a.tol, QUADRATURE_DEPTH))?;
    let sys = usage(SlidingSystem::new(a.delta, ctrl))?;
    let forced = a.domain.map(DomainId::new).transpose().map_err(Failure::Usage)?;

    let prob = GreenProblem::new(lam, x0);
    let closed = green_closed(&prob, &x)?;
    let rep = match forced {
        Some(m) => {
            let xr = rotation_taking(&x0, &SpherePoint::NORTH_POLE).apply_point(&x);
            green_pw(&GreenProblem::north(lam), &xr, m, &sys)?
        }
        None => green_pw_general(&prob, &x, &sys)?,
    };
    let (abs_err, rel_err) = relative(rep.value, closed);
    Ok(json!({
        "schema": SCHEMA,
        "command": "eval-green",
        "lambda": pair(lam.value()),
        "x": [a.theta, a.phi],
        "x0": [a.theta0, a.phi0],
        "delta": a.delta,
        "closed": pair(closed),
        "pw": pair(rep.value),
        "abs_err": abs_err,
        "rel_err": rel_err,
        "m_used": rep.domain.index(),
        "quadrature_error_estimate": rep.error_estimate,
    }))
}

pub fn eval_legendre(a: &LegendreArgs) -> Result<Value, Failure> {
    let lam = degree(&a.degree)?;
    let q = Complex64::new(a.q, a.q_im);
    let real_only = |what: &str| -> Result<f64, Failure> {
        if a.q_im != 0.0 {
            return Err(Failure::Usage(Error::PreconditionViolation(format!(
                "the {what} method takes a real argument"
            ))));
        }
        Ok(a.q)
    };
    let (method, value) = match a.method {
        LegendreMethod::Auto => {
            let v = if a.q_im == 0.0 && a.q > -1.0 && a.q <= 1.0 {
                legendre_p(&lam, a.q)?
            } else {
                legendre_p_complex(&lam, q)?
            };
            ("auto", v)
        }
        LegendreMethod::Series => {
            let ctrl = usage(SeriesControl::new(a.tol, 2000))?;
            ("series", legendre_p_series(&lam, real_only("series")?, &ctrl)?)
        }
        LegendreMethod::Integral => {
            let ctrl = usage(QuadratureControl::new(a.tol, 24))?;
            ("integral", legendre_p_integral(&lam, real_only("integral")?, &ctrl)?)
        }
        LegendreMethod::Infinity => {
            let ctrl = usage(SeriesControl::new(a.tol, 2000))?;
            ("infinity", legendre_p_infinity(&lam, q, &ctrl)?)
        }
    };
    Ok(json!({
        "schema": SCHEMA,
        "command": "eval-legendre",
        "lambda": pair(lam.value()),
        "q": pair(q),
        "method": method,
        "value": pair(value),
    }))
}

struct SweepRow {
    theta: f64,
    phi: f64,
    m: Option<usize>,
    closed: Option<Complex64>,
    pw: Option<Complex64>,
    error: Option<Error>,
}

impl SweepRow {
    fn rel_err(&self) -> Option<f64> {
        match (self.closed, self.pw) {
            (Some(c), Some(p)) => Some(relative(p, c).1),
            _ => None,
        }
    }
}

fn sweep_point(prob: &GreenProblem, sys: &SlidingSystem, theta: f64, phi: f64) -> SweepRow {
    let mut row = SweepRow {
        theta,
        phi,
        m: None,
        closed: None,
        pw: None,
        error: None,
    };
    let x = match SpherePoint::new(theta, phi) {
        Ok(x) => x,
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    };
    match green_closed(prob, &x) {
        Ok(v) => row.closed = Some(v),
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    }
    match green_pw_general(prob, &x, sys) {
        Ok(r) => {
            row.m = Some(r.domain.index());
            row.pw = Some(r.value);
        }
        Err(e) => row.error = Some(e),
    }
    row
}

fn csv_number(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.11e}")).unwrap_or_default()
}

pub fn sweep(a: &SweepArgs) -> Result<Output, Failure> {
    let lam = degree(&a.degree)?;
    let ctrl = usage(QuadratureControl::new(a.tol, QUADRATURE_DEPTH))?;
    let sys = usage(SlidingSystem::new(a.delta, ctrl))?;
    let prob = GreenProblem::north(lam);
    let (nt, np) = (a.n_theta, a.n_phi);
    let rows: Vec<SweepRow> = (0..nt * np)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / np, k % np);
            let theta = a.theta_min + (a.theta_max - a.theta_min) * (i as f64 + 0.5) / nt as f64;
            let phi = a.phi_min + (a.phi_max - a.phi_min) * j as f64 / np as f64;
            sweep_point(&prob, &sys, theta, phi)
        })
        .collect();
    match a.output {
        OutputFormat::Csv => {
            let mut out = String::from("theta,phi,m,closed_re,closed_im,pw_re,pw_im,rel_err,error\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    csv_number(Some(r.theta)),
                    csv_number(Some(r.phi)),
                    r.m.map(|m| m.to_string()).unwrap_or_default(),
                    csv_number(r.closed.map(|c| c.re)),
                    csv_number(r.closed.map(|c| c.im)),
                    csv_number(r.pw.map(|c| c.re)),
                    csv_number(r.pw.map(|c| c.im)),
                    csv_number(r.rel_err()),
                    r.error.as_ref().map(|e| e.kind()).unwrap_or(""),
                ));
            }
            Ok(Output::Text(out))
        }
        OutputFormat::Json => {
            let records: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "theta": r.theta,
                        "phi": r.phi,
                        "m": r.m,
                        "closed": r.closed.map(pair),
                        "pw": r.pw.map(pair),
                        "rel_err": r.rel_err(),
                        "error": r.error.as_ref().map(|e| error_record(e)["error"].clone()),
                    })
                })
                .collect();
            let max_rel = rows.iter().filter_map(SweepRow::rel_err).fold(0.0, f64::max);
            Ok(Output::Json(json!({
                "schema": SCHEMA,
                "command": "sweep",
                "lambda": pair(lam.value()),
                "delta": a.delta,
                "max_rel_err": max_rel,
                "rows": records,
            })))
        }
    }
}

pub fn planar_check(a: &PlanarArgs) -> Result<Value, Failure> {
    let p = usage(PlanarProblem::new(a.k, a.y1, a.y2))?;
    let ctrl = usage(QuadratureControl::new(a.tol, QUADRATURE_DEPTH))?;
    let closed = planar_closed(&p)?;
    let domains = match a.domain {
        Some(m) if (1..=4).contains(&m) => vec![m],
        Some(m) => {
            return Err(Failure::Usage(Error::PreconditionViolation(format!(
                "planar domain index must be in 1..=4, got {m}"
            ))))
        }
        None => p.domains(),
    };
    let mut results = Vec::new();
    let mut max_rel: f64 = 0.0;
    for m in domains {
        let pw = match planar_pw(&p, m, &ctrl) {
            Ok(v) => v,
            Err(e) if a.domain.is_some() => return Err(e.into()),
            Err(e) => {
                results.push(json!({ "m": m, "error": error_record(&e)["error"].clone() }));
                continue;
            }
        };
        let (abs_err, rel_err) = relative(pw, closed);
        max_rel = max_rel.max(rel_err);
        results.push(json!({ "m": m, "pw": pair(pw), "abs_err": abs_err, "rel_err": rel_err }));
    }
    Ok(json!({
        "schema": SCHEMA,
        "command": "planar-check",
        "k": a.k,
        "y": [a.y1, a.y2],
        "closed": pair(closed),
        "results": results,
        "max_rel_err": max_rel,
    }))
}

pub fn build_contour(a: &ContourArgs) -> Result<Value, Failure> {
    let contour = build_gamma(a.m, a.delta, a.samples.max(64)).map_err(|e| match e {
        Error::PreconditionViolation(_) => Failure::Usage(e),
        other => other.into(),
    })?;
    let normal = (a.m >= 2).then(|| sliding_plane_normal(a.m, a.delta));
    Ok(json!({
        "schema": SCHEMA,
        "command": "build-contour",
        "m": a.m,
        "delta": a.delta,
        "excluded_cap": excluded_cap(a.delta),
        "plane_normal": normal,
        "net_real_advance": contour.net_real_advance(),
        "contour": contour.to_json(a.samples),
    }))
}
