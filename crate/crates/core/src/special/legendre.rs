use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{digamma, gamma};
use super::{Degree, SeriesControl};
use crate::contour::{integrate, Contour, QuadratureControl};
use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Legendre function from the integral
/// `(1/2pi) * int_{-pi}^{pi} (q + i sqrt(1 - q^2) cos a)^lambda da`, valid for
/// `0 < q <= 1`.
pub fn legendre_p_integral(
    lambda: &Degree,
    q: f64,
    ctrl: &QuadratureControl,
) -> Result<Complex64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::DomainError(format!(
            "integral formula needs 0 < q <= 1, got {q}"
        )));
    }
    let lam = lambda.value();
    let s = (1.0 - q * q).max(0.0).sqrt();
    let path = Contour::segment(Complex64::new(-PI, 0.0), Complex64::new(PI, 0.0));
    let integral = integrate(
        |alpha: Complex64| Ok(Complex64::new(q, s * alpha.re.cos()).powc(lam)),
        &path,
        ctrl,
    )?;
    Ok(integral.value / (2.0 * PI))
}

/// Hypergeometric series `2F1(-lambda, lambda + 1; 1; (1 - q)/2)` on
/// `-1 < q <= 1`.
pub fn legendre_p_series(lambda: &Degree, q: f64, ctrl: &SeriesControl) -> Result<Complex64> {
    if !(q > -1.0 && q <= 1.0) {
        return Err(Error::DomainError(format!(
            "hypergeometric series needs -1 < q <= 1, got {q}"
        )));
    }
    hypergeometric_near_one(lambda.value(), Complex64::new(q, 0.0), ctrl)
}

fn hypergeometric_near_one(lam: Complex64, q: Complex64, ctrl: &SeriesControl) -> Result<Complex64> {
    let x = (1.0 - q) / 2.0;
    let shrink = 1.0 - x.norm();
    if shrink <= 0.0 {
        return Err(Error::DomainError(format!(
            "series about q = 1 diverges at q = {q}"
        )));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..=ctrl.max_terms {
        let nf = n as f64;
        term *= (nf - 1.0 - lam) * (nf + lam) / (nf * nf) * x;
        sum += term;
        if term.norm() <= ctrl.rel_tol * shrink * sum.norm().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        terms: ctrl.max_terms,
    })
}

/// Logarithmic expansion of `P_lambda(q)` about `q = -1`, valid for
/// `|1 + q| < 2` off the cut `q <= -1`.
pub fn legendre_p_near_minus_one(
    lambda: &Degree,
    q: Complex64,
    ctrl: &SeriesControl,
) -> Result<Complex64> {
    let lam = lambda.value();
    let y = (1.0 + q) / 2.0;
    let shrink = 1.0 - y.norm();
    if shrink <= 0.0 {
        return Err(Error::DomainError(format!(
            "expansion about q = -1 diverges at q = {q}"
        )));
    }
    if y.norm() == 0.0 || (y.im == 0.0 && y.re < 0.0) {
        return Err(Error::DomainError(format!(
            "q = {q} lies on the branch cut of the Legendre function"
        )));
    }
    let a = -lam;
    let b = lam + 1.0;
    let log_y = y.ln();
    let mut psi_one = Complex64::new(-EULER_GAMMA, 0.0);
    let mut psi_a = digamma(a)?;
    let mut psi_b = digamma(b)?;
    let mut coef = Complex64::new(1.0, 0.0);
    let mut y_pow = Complex64::new(1.0, 0.0);
    let mut sum = 2.0 * psi_one - psi_a - psi_b - log_y;
    for k in 1..=ctrl.max_terms {
        let km = (k - 1) as f64;
        coef *= (a + km) * (b + km) / ((km + 1.0) * (km + 1.0));
        psi_one += 1.0 / (km + 1.0);
        psi_a += 1.0 / (a + km);
        psi_b += 1.0 / (b + km);
        y_pow *= y;
        let term = coef * y_pow * (2.0 * psi_one - psi_a - psi_b - log_y);
        sum += term;
        if term.norm() <= ctrl.rel_tol * shrink * sum.norm().max(f64::MIN_POSITIVE) {
            return Ok(-(PI * lam).sin() / PI * sum);
        }
    }
    Err(Error::NoConvergence {
        terms: ctrl.max_terms,
    })
}

/// `P_lambda(q)` on the whole interval `-1 < q <= 1`, choosing between the
/// expansions about `q = 1` and `q = -1`.
pub fn legendre_p(lambda: &Degree, q: f64) -> Result<Complex64> {
    legendre_p_complex(lambda, Complex64::new(q, 0.0))
}

/// `P_lambda(q)` for complex `q` off the cut `(-inf, -1]`, on the union of
/// the two disks where the local expansions converge quickly, and through
/// the expansion at infinity elsewhere.
pub fn legendre_p_complex(lambda: &Degree, q: Complex64) -> Result<Complex64> {
    let ctrl = SeriesControl {
        rel_tol: 1e-15,
        max_terms: 2000,
    };
    let near_one = (1.0 - q).norm() / 2.0;
    let near_minus_one = (1.0 + q).norm() / 2.0;
    if near_one <= 0.6 || (near_one < 0.9 && near_one <= near_minus_one) {
        hypergeometric_near_one(lambda.value(), q, &ctrl)
    } else if near_minus_one < 0.9 {
        legendre_p_near_minus_one(lambda, q, &ctrl)
    } else {
        legendre_p_infinity(lambda, q, &ctrl)
    }
}

fn reciprocal_gamma(z: Complex64) -> Complex64 {
    match gamma(z) {
        Ok(g) => g.inv(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

fn leading_coefficient(mu: Complex64, label: &str) -> Result<Complex64> {
    let g = gamma(-0.5 - mu).map_err(|_| {
        Error::PoleError(format!("{label}: Gamma(-1/2 - ({mu})) in the leading coefficient"))
    })?;
    Ok(Complex64::new(2.0, 0.0).powc(-mu - 1.0) * g * reciprocal_gamma(-mu) / PI.sqrt())
}

/// `P_lambda(z)` for `|z| > 1` from the two series in `1/z^2`.
pub fn legendre_p_infinity(lambda: &Degree, z: Complex64, ctrl: &SeriesControl) -> Result<Complex64> {
    if z.norm() <= 1.0 + 1e-6 {
        return Err(Error::DomainError(format!(
            "expansion at infinity needs |z| > 1, got {z}"
        )));
    }
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::DomainError(format!("z = {z} lies on the cut (-inf, 0]")));
    }
    let lam = lambda.value();
    let mu = -lam - 1.0;
    let a_lam = leading_coefficient(lam, "A(lambda)")?;
    let a_mu = leading_coefficient(mu, "A(-lambda-1)")?;
    let s1 = infinity_tail(lam, z, ctrl, "a_n(lambda)")?;
    let s2 = infinity_tail(mu, z, ctrl, "a_n(-lambda-1)")?;
    Ok(a_lam * z.powc(-lam - 1.0) * s1 + a_mu * z.powc(lam) * s2)
}

/// `sum_n a_n(mu) z^(-2n)` with `a_0 = 1`.
fn infinity_tail(mu: Complex64, z: Complex64, ctrl: &SeriesControl, label: &str) -> Result<Complex64> {
    let w = (z * z).inv();
    let shrink = 1.0 - w.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..=ctrl.max_terms {
        let nf = n as f64;
        let den = 4.0 * nf * (nf + mu + 0.5);
        if den.norm() < 1e-12 {
            return Err(Error::PoleError(format!("{label} at n = {n}")));
        }
        term *= (2.0 * nf + mu) * (2.0 * nf + mu - 1.0) / den * w;
        sum += term;
        if term.norm() <= ctrl.rel_tol * shrink * sum.norm().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        terms: ctrl.max_terms,
    })
}

/// Coefficients `a_n(mu)` of the expansion at infinity, for inspection.
#[cfg(test)]
pub(crate) fn infinity_coefficients(mu: Complex64, count: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    let mut a = Complex64::new(1.0, 0.0);
    for n in 0..count {
        if n > 0 {
            let nf = n as f64;
            a *= (2.0 * nf + mu) * (2.0 * nf + mu - 1.0) / (4.0 * nf * (nf + mu + 0.5));
        }
        out.push(a);
    }
    out
}
