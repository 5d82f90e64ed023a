//! Log-gamma on the complex plane.
//!
//! The real-axis log-gamma comes from `statrs`; the Mellin-Barnes integrand
//! needs `ln Γ` along vertical lines, which is computed here with the
//! Lanczos approximation (g = 7, nine terms) and the reflection formula.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Real log-gamma, `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Complex log-gamma. The imaginary part is only defined modulo 2π; callers
/// exponentiate sums of these values, so the branch is irrelevant.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_complex(1.0 - z);
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_real_log_gamma() {
        for &x in &[
            0.1,
            0.5,
            1.0,
            1.5,
            2.0 / 3.0,
            4.0 / 3.0,
            7.25,
            20.0,
            33.5,
            61.0,
        ] {
            let c = ln_gamma_complex(Complex64::new(x, 0.0));
            assert!(
                (c.re - ln_gamma(x)).abs() < 1e-12 * (1.0 + ln_gamma(x).abs()),
                "x={x}"
            );
            assert!(c.im.abs() < 1e-14);
        }
    }

    #[test]
    fn factorials() {
        let mut fact = 1.0f64;
        for n in 1..20u32 {
            fact *= n as f64;
            let lg = ln_gamma_complex(Complex64::new(n as f64 + 1.0, 0.0));
            assert!((lg.re.exp() / fact - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn recurrence_off_axis() {
        // ln Γ(z+1) - ln Γ(z) = ln z  (mod 2πi)
        for &(x, y) in &[
            (0.3, 1.0),
            (1.7, -4.0),
            (2.5, 12.0),
            (-0.4, 3.0),
            (5.0, 30.0),
        ] {
            let z = Complex64::new(x, y);
            let d = ln_gamma_complex(z + 1.0) - ln_gamma_complex(z) - z.ln();
            assert!(d.re.abs() < 1e-12, "z={z} d={d}");
            let k = (d.im / (2.0 * PI)).round();
            assert!((d.im - 2.0 * PI * k).abs() < 1e-11, "z={z} d={d}");
        }
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        for &y in &[0.0, 0.5, 2.0, 7.0, 15.0] {
            let lg = ln_gamma_complex(Complex64::new(0.5, y));
            let expected = 0.5 * (PI.ln() - (PI * y).cosh().ln());
            assert!((lg.re - expected).abs() < 1e-12, "y={y}");
        }
    }
}
