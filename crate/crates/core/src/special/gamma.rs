use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn near_non_positive_integer(z: Complex64, tol: f64) -> bool {
    z.re <= tol && (z.re - z.re.round()).abs() <= tol && z.im.abs() <= tol
}

/// Gamma function of a complex argument (Lanczos, `g = 7`, nine terms,
/// with reflection for `Re z < 1/2`).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if near_non_positive_integer(z, 1e-12) {
        return Err(Error::PoleError(format!("Gamma({z})")));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return PI / (s * gamma_unchecked(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &p) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Digamma function of a complex argument.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if near_non_positive_integer(z, 1e-12) {
        return Err(Error::PoleError(format!("digamma({z})")));
    }
    Ok(digamma_unchecked(z))
}

fn digamma_unchecked(mut z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    if z.re < 0.5 {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        let pz = PI * z;
        acc -= PI * pz.cos() / pz.sin();
        z = 1.0 - z;
    }
    while z.norm() < 12.0 {
        acc -= z.inv();
        z += 1.0;
    }
    // B_2k / (2k) for k = 1..7
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let zi2 = (z * z).inv();
    let mut pow = zi2;
    let mut series = Complex64::new(0.0, 0.0);
    for c in C {
        series += c * pow;
        pow *= zi2;
    }
    acc + z.ln() - 0.5 * z.inv() - series
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn classical_values() {
        assert!(rel(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
    }

    #[test]
    fn recurrence_self_consistency() {
        let z = c(3.5, 1.2);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        assert!(rel(lhs, rhs) < 1e-13);
    }

    #[test]
    fn reference_values() {
        // mpmath, 30 digits
        let cases = [
            (c(3.5, 1.2), c(0.567_725_902_873_608_7, 2.573_037_710_094_865_7)),
            (c(-2.3, 0.7), c(-0.062_275_072_013_688_24, -0.274_869_820_381_396_9)),
            (c(12.0, -7.5), c(4_014_444.419_101_362, 222_665.162_998_171_24)),
        ];
        for (z, want) in cases {
            let got = gamma(z).unwrap();
            assert!(rel(got, want) < 1e-12, "Gamma({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        for k in 0..5 {
            assert!(matches!(gamma(c(-(k as f64), 0.0)), Err(Error::PoleError(_))));
        }
        assert!(gamma(c(-1.0, 1e-6)).is_ok());
    }

    #[test]
    fn digamma_values() {
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma(c(1.0, 0.0)).unwrap() - c(-euler, 0.0)).norm() < 1e-14);
        assert!(
            (digamma(c(0.5, 0.0)).unwrap() - c(-euler - 2.0 * 2f64.ln(), 0.0)).norm() < 1e-14
        );
        // mpmath digamma(0.3+0.2j), digamma(-1.7+0.5j)
        let a = digamma(c(0.3, 0.2)).unwrap();
        assert!((a - c(-2.453_365_467_675_574, 1.762_178_090_380_654_6)).norm() < 1e-13, "{a}");
        let b = digamma(c(-1.7, 0.5)).unwrap();
        assert!((b - c(0.569_793_827_136_033_5, 2.828_477_325_368_168)).norm() < 1e-13, "{b}");
        // recurrence
        let z = c(2.2, -3.1);
        let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap() - z.inv();
        assert!(d.norm() < 1e-14);
    }
}
