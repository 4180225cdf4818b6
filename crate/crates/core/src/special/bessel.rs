use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 8.0;
const MAX_ARGUMENT: f64 = 30.0;

fn check_domain(x: f64, allow_zero: bool) -> Result<()> {
    let low_ok = if allow_zero { x >= 0.0 } else { x > 0.0 };
    if !low_ok || !(x <= MAX_ARGUMENT) {
        return Err(Error::DomainError(format!(
            "Bessel functions are provided on (0, {MAX_ARGUMENT}], got {x}"
        )));
    }
    Ok(())
}

/// Bessel function `J_0(x)` for `0 <= x <= 30`.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_domain(x, true)?;
    if x <= SERIES_LIMIT {
        Ok(j0_series(x))
    } else {
        Ok(miller(x).j0)
    }
}

/// Bessel function `J_1(x)` for `0 <= x <= 30`.
pub fn bessel_j1(x: f64) -> Result<f64> {
    check_domain(x, true)?;
    if x <= SERIES_LIMIT {
        Ok(j1_series(x))
    } else {
        Ok(miller(x).j1)
    }
}

/// Bessel function `Y_0(x)` for `0 < x <= 30`.
pub fn bessel_y0(x: f64) -> Result<f64> {
    check_domain(x, false)?;
    if x <= SERIES_LIMIT {
        Ok(y0_series(x))
    } else {
        Ok(miller(x).y0)
    }
}

/// Bessel function `Y_1(x)` for `0 < x <= 30`.
pub fn bessel_y1(x: f64) -> Result<f64> {
    check_domain(x, false)?;
    if x <= SERIES_LIMIT {
        Ok(y1_series(x))
    } else {
        Ok(miller(x).y1)
    }
}

/// Hankel function `H_0^(1)(x) = J_0(x) + i Y_0(x)`.
pub fn hankel_h0_1(x: f64) -> Result<Complex64> {
    check_domain(x, false)?;
    Ok(Complex64::new(bessel_j0(x)?, bessel_y0(x)?))
}

fn j0_series(x: f64) -> f64 {
    let t = -x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= t / (kf * kf);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn j1_series(x: f64) -> f64 {
    let t = -x * x / 4.0;
    let mut term = x / 2.0;
    let mut sum = term;
    for k in 1..60 {
        let kf = k as f64;
        term *= t / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn y0_series(x: f64) -> f64 {
    let t = x * x / 4.0;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= -t / (kf * kf);
        harmonic += 1.0 / kf;
        let add = -term * harmonic;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    2.0 / PI * (((x / 2.0).ln() + EULER_GAMMA) * j0_series(x) + sum)
}

fn y1_series(x: f64) -> f64 {
    // Y_1 = (2/pi) J_1 ln(x/2) - 2/(pi x)
    //       - (1/pi) sum_k (-1)^k (psi(k+1) + psi(k+2)) (x/2)^(2k+1) / (k! (k+1)!)
    let half = x / 2.0;
    let t = half * half;
    let mut term = half;
    let mut psi1 = -EULER_GAMMA;
    let mut psi2 = 1.0 - EULER_GAMMA;
    let mut sum = term * (psi1 + psi2);
    for k in 1..60 {
        let kf = k as f64;
        term *= -t / (kf * (kf + 1.0));
        psi1 += 1.0 / kf;
        psi2 += 1.0 / (kf + 1.0);
        let add = term * (psi1 + psi2);
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    2.0 / PI * j1_series(x) * half.ln() - 2.0 / (PI * x) - sum / PI
}

struct MillerValues {
    j0: f64,
    j1: f64,
    y0: f64,
    y1: f64,
}

/// Backward recurrence for `J_n`, normalized by `J_0 + 2 sum J_2k = 1`, with
/// the Neumann series for `Y_0` and its derivative for `Y_1`.
fn miller(x: f64) -> MillerValues {
    let start = 2 * (((x + 30.0 + 2.0 * x.sqrt() * 3.0) as usize) / 2 + 1);
    let mut j = vec![0.0f64; start + 2];
    j[start] = 1e-30;
    for n in (1..=start).rev() {
        j[n - 1] = 2.0 * n as f64 / x * j[n] - j[n + 1];
        if j[n - 1].abs() > 1e250 {
            for v in j.iter_mut().skip(n - 1) {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = j[0];
    for k in (2..=start).step_by(2) {
        norm += 2.0 * j[k];
    }
    for v in j.iter_mut() {
        *v /= norm;
    }
    // Y_0 = (2/pi)(ln(x/2) + gamma) J_0 - (4/pi) sum_k (-1)^k J_2k / k
    // Y_1 = -Y_0', using J_2k' = (J_2k-1 - J_2k+1) / 2
    let mut neumann0 = 0.0;
    let mut neumann1 = 0.0;
    for k in 1..start / 2 {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        neumann0 += sign * j[2 * k] / kf;
        neumann1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / kf;
    }
    let log_term = (x / 2.0).ln() + EULER_GAMMA;
    let y0 = 2.0 / PI * log_term * j[0] - 4.0 / PI * neumann0;
    let y1 = -2.0 / PI * j[0] / x + 2.0 / PI * log_term * j[1] + 2.0 / PI * neumann1;
    MillerValues {
        j0: j[0],
        j1: j[1],
        y0,
        y1,
    }
}
