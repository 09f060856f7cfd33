//! Continuous dual Hahn polynomials S_n^λ(y²; a, b).
//!
//! The default evaluation is the upward three-term recurrence
//!
//! ```text
//! y² S_n = [(n+λ+a)(n+λ+b) + n(n+a+b−1) − λ²] S_n − n(n+a+b−1) S_{n−1} − (n+λ+a)(n+λ+b) S_{n+1}
//! ```
//!
//! The terminating ₃F₂ at unit argument is kept as an independent check. Its
//! alternating terms cancel badly for large y² and n, so the sum is carried
//! in double-double arithmetic.

use std::f64::consts::PI;

use twofloat::TwoFloat;

use super::gamma::{log_abs_gamma_complex, log_gamma};
use crate::error::{domain, Error, Result};

/// Arguments (λ, a, b, y²) of one polynomial family evaluation.
///
/// Negative `y2` is the analytic continuation used for bound states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdhArgs {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub y2: f64,
}

impl CdhArgs {
    pub fn new(lambda: f64, a: f64, b: f64, y2: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return domain(format!("CDH parameter lambda must be positive, got {lambda}"));
        }
        if !a.is_finite() || !b.is_finite() || !y2.is_finite() {
            return domain("CDH arguments must be finite");
        }
        Ok(Self { lambda, a, b, y2 })
    }

    /// Coefficient of S_{n+1}: (n+λ+a)(n+λ+b).
    pub fn upper(&self, n: usize) -> f64 {
        let n = n as f64;
        (n + self.lambda + self.a) * (n + self.lambda + self.b)
    }

    /// Coefficient of S_{n−1}: n(n+a+b−1).
    pub fn lower(&self, n: usize) -> f64 {
        let n = n as f64;
        n * (n + self.a + self.b - 1.0)
    }

    /// Coefficient of S_n after moving y² to the right-hand side.
    pub fn diagonal(&self, n: usize) -> f64 {
        self.upper(n) + self.lower(n) - self.lambda * self.lambda - self.y2
    }
}

/// S_0, …, S_{n_max} by upward recurrence.
pub fn cdh_recursion(args: &CdhArgs, n_max: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    for n in 0..n_max {
        let up = args.upper(n);
        if up == 0.0 {
            return Err(Error::DegenerateRecursion { n });
        }
        let prev = if n == 0 { 0.0 } else { out[n - 1] };
        let next = (args.diagonal(n) * out[n] - args.lower(n) * prev) / up;
        out.push(next);
    }
    Ok(out)
}

/// Double-double quotient by one Newton correction; the crate's own division
/// returns only a double-precision result.
fn div(num: TwoFloat, den: TwoFloat) -> TwoFloat {
    let inv = 1.0 / den.hi();
    let q = num * inv;
    q + (num - q * den) * inv
}

/// ₃F₂(−n, λ+iy, λ−iy; λ+a, λ+b | 1), summed in double-double precision.
///
/// The conjugate pair is folded into the real product Π ((λ+j)² + y²), so
/// negative y² needs no complex arithmetic.
pub fn cdh_3f2(args: &CdhArgs, n: usize) -> Result<f64> {
    let lambda = TwoFloat::from(args.lambda);
    let la = lambda + args.a;
    let lb = lambda + args.b;
    let mut term = TwoFloat::from(1.0);
    let mut sum = TwoFloat::from(1.0);
    for k in 0..n {
        let kf = k as f64;
        let den = (la + kf) * (lb + kf);
        if den == 0.0 {
            return domain(format!("3F2 denominator Pochhammer vanishes at k = {k}"));
        }
        let shifted = lambda + kf;
        let pair = shifted * shifted + args.y2;
        term = div(term * pair * (kf - n as f64), den * (kf + 1.0));
        sum += term;
    }
    Ok(f64::from(sum))
}

/// Orthogonality weight ρ^λ(y) = (1/2π) |Γ(λ+iy)Γ(a+iy)Γ(b+iy) / (Γ(λ+a)Γ(λ+b)Γ(2iy))|².
///
/// Restricted to the positive-measure regime λ, a, b > 0. At y = 0 the
/// weight vanishes because |Γ(2iy)| diverges.
pub fn cdh_weight(lambda: f64, a: f64, b: f64, y: f64) -> Result<f64> {
    if !(lambda > 0.0 && a > 0.0 && b > 0.0) {
        return domain(format!("cdh_weight requires lambda, a, b > 0, got ({lambda}, {a}, {b})"));
    }
    if !(y >= 0.0) {
        return domain(format!("cdh_weight requires y >= 0, got {y}"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    Ok(log_weight_any(lambda, a, b, y)?.exp())
}

/// ln ρ^λ(y) for any real parameters away from Gamma poles; no sign restrictions.
pub(crate) fn log_weight_any(lambda: f64, a: f64, b: f64, y: f64) -> Result<f64> {
    let numerator = log_abs_gamma_complex(lambda, y)? + log_abs_gamma_complex(a, y)? + log_abs_gamma_complex(b, y)?;
    let la = lambda + a;
    let lb = lambda + b;
    let real_part = |x: f64| if x > 0.0 { log_gamma(x) } else { log_abs_gamma_complex(x, 0.0) };
    let denominator = real_part(la)? + real_part(lb)? + log_abs_gamma_complex(0.0, 2.0 * y)?;
    Ok(2.0 * (numerator - denominator) - (2.0 * PI).ln())
}
