//! Generalized Laguerre polynomials L_n^ν(x).
//!
//! Values come from the upward three-term recurrence
//! (n+1) L_{n+1} = (2n+ν+1−x) L_n − (n+ν) L_{n−1}, seeded by L_0 = 1 and
//! L_1 = 1+ν−x.

use crate::error::{domain, Result};

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > -1.0) || !nu.is_finite() {
        return domain(format!("Laguerre parameter must satisfy nu > -1, got {nu}"));
    }
    Ok(())
}

/// L_n^ν(x).
pub fn laguerre(n: usize, nu: f64, x: f64) -> Result<f64> {
    check_nu(nu)?;
    Ok(laguerre_pair(n, nu, x).0)
}

/// x · d/dx L_n^ν(x) = n L_n^ν − (n+ν) L_{n−1}^ν.
pub fn laguerre_x_ddx(n: usize, nu: f64, x: f64) -> Result<f64> {
    check_nu(nu)?;
    let (ln, lm) = laguerre_pair(n, nu, x);
    Ok(n as f64 * ln - (n as f64 + nu) * lm)
}

/// L_0^ν(x), …, L_{n_max}^ν(x).
pub fn laguerre_sequence(n_max: usize, nu: f64, x: f64) -> Result<Vec<f64>> {
    check_nu(nu)?;
    Ok(sequence_unchecked(n_max, nu, x))
}

/// (L_n^ν(x), L_{n−1}^ν(x)) with L_{−1} ≡ 0. No parameter check.
pub(crate) fn laguerre_pair(n: usize, nu: f64, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + nu + 1.0 - x) * cur - (kf + nu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

pub(crate) fn sequence_unchecked(n_max: usize, nu: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(1.0 + nu - x);
    for k in 1..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + nu + 1.0 - x) * out[k] - (kf + nu) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Terminating confluent hypergeometric sum ₁F₁(−n; c; x) = Σ_k (−n)_k x^k / ((c)_k k!).
///
/// Returns the sum together with Σ|terms|, the natural scale for judging
/// cancellation in the result.
pub fn hyp1f1_terminating(n: usize, c: f64, x: f64) -> (f64, f64) {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - n as f64) * x / ((c + kf) * (kf + 1.0));
        sum += term;
        abs_sum += term.abs();
    }
    (sum, abs_sum)
}
