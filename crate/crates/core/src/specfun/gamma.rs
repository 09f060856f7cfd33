//! Real and complex gamma functions.
//!
//! The real log-gamma is delegated to `libm::lgamma`, a port of the FreeBSD
//! msun implementation. The complex modulus uses a Lanczos approximation
//! (g = 607/128, 15 terms) on Re z ≥ 1/2 and the reflection formula below it.
//! Only |Γ| is ever needed downstream, so the phase is never formed.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_78;

/// ln Γ(x) for real x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires finite x > 0, got {x}"));
    }
    Ok(libm::lgamma(x))
}

/// ln |Γ(re + i·im)|, valid everywhere except the poles at the non-positive integers.
pub fn log_abs_gamma_complex(re: f64, im: f64) -> Result<f64> {
    if !re.is_finite() || !im.is_finite() {
        return domain(format!("log_abs_gamma_complex requires finite input, got ({re}, {im})"));
    }
    if im == 0.0 && re <= 0.0 && re == re.round() {
        return domain(format!("Gamma has a pole at {re}"));
    }
    if im == 0.0 && re > 0.0 {
        return Ok(libm::lgamma(re));
    }
    Ok(if re < 0.5 {
        // |Γ(z)| = π / (|sin πz| |Γ(1−z)|)
        PI.ln() - ln_abs_sin_pi(re, im) - lanczos_log_abs(1.0 - re, -im)
    } else {
        lanczos_log_abs(re, im)
    })
}

fn lanczos_log_abs(re: f64, im: f64) -> f64 {
    let w = Complex64::new(re - 1.0, im);
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (w + k as f64);
    }
    let t = w + LANCZOS_G + 0.5;
    HALF_LN_2PI + ((w + 0.5) * t.ln()).re - t.re + series.norm().ln()
}

/// ln |sin(π(x + iy))| without overflow for large |y|.
fn ln_abs_sin_pi(x: f64, y: f64) -> f64 {
    let r = x - x.round();
    let s2 = (PI * r).sin().powi(2);
    let b = PI * y.abs();
    if b < 20.0 {
        0.5 * (s2 + b.sinh().powi(2)).ln()
    } else {
        // sin²a + sinh²b = e^{2b}/4 · (1 + (4 sin²a − 2) e^{−2b} + e^{−4b})
        let e = (-2.0 * b).exp();
        b - std::f64::consts::LN_2 + 0.5 * ((4.0 * s2 - 2.0) * e + e * e).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn real_log_gamma_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_relative_eq!(log_gamma(0.5).unwrap(), 0.5 * PI.ln(), max_relative = 1e-14);
        // ln 9!
        assert_relative_eq!(log_gamma(10.0).unwrap(), 12.801_827_480_081_469_611, max_relative = 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn real_log_gamma_matches_factorials_over_range() {
        let mut ln_fact = 0.0_f64;
        for n in 1..=170u32 {
            // ln Γ(n+1) = ln n!
            ln_fact += (n as f64).ln();
            assert_relative_eq!(log_gamma(n as f64 + 1.0).unwrap(), ln_fact, max_relative = 1e-13);
        }
    }

    #[test]
    fn complex_reduces_to_real_axis() {
        assert_eq!(log_abs_gamma_complex(1.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(log_abs_gamma_complex(0.5, 0.0).unwrap(), 0.572_364_942_924_700_087, max_relative = 1e-14);
        for &x in &[0.7, 1.3, 2.5, 7.25, 31.0] {
            assert_relative_eq!(lanczos_log_abs(x, 0.0), libm::lgamma(x), max_relative = 1e-13, epsilon = 1e-15);
        }
    }

    #[test]
    fn complex_values_against_high_precision() {
        // |Γ(i)|² = π / sinh π
        assert_relative_eq!(
            log_abs_gamma_complex(0.0, 1.0).unwrap(),
            -0.650_923_199_301_856_338_9,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            log_abs_gamma_complex(2.5, -3.7).unwrap(),
            -2.191_210_836_629_269_920,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            log_abs_gamma_complex(-2.3, 0.4).unwrap(),
            -0.405_208_695_219_923_275_7,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            log_abs_gamma_complex(0.2, 40.0).unwrap(),
            -63.019_573_374_362_727_99,
            max_relative = 1e-13
        );
    }

    #[test]
    fn reflection_identity_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for &y in &[0.1, 0.5, 2.0, 5.0, 12.0] {
            let expect = 0.5 * (PI / (y * (PI * y).sinh())).ln();
            assert_relative_eq!(log_abs_gamma_complex(0.0, y).unwrap(), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn poles_are_rejected() {
        assert!(log_abs_gamma_complex(0.0, 0.0).is_err());
        assert!(log_abs_gamma_complex(-3.0, 0.0).is_err());
        assert!(log_abs_gamma_complex(-3.0, 1e-3).is_ok());
        assert!(log_abs_gamma_complex(-2.5, 0.0).is_ok());
    }
}
