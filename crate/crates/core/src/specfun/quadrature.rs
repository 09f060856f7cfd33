//! Gauss rules from the eigenvalues of the symmetric Jacobi matrix (Golub-Welsch).
//!
//! Eigenvalues seed the nodes, a few Newton steps on the defining polynomial
//! polish them, and the weights come from the closed-form Christoffel numbers
//! rather than from eigenvector components, which lose relative accuracy on
//! the tiny weights of the outer nodes.

use nalgebra::{DMatrix, SymmetricEigen};

use super::gamma::log_gamma;
use super::laguerre::laguerre_pair;
use crate::error::{domain, Error, Result};

/// Generalized Gauss-Laguerre rule for the measure x^ν e^{−x} dx on (0, ∞).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub weight_exponent: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Σ wᵢ f(xᵢ) ≈ ∫₀^∞ x^ν e^{−x} f(x) dx.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.order - 1
    }
}

fn jacobi_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
    }
    for (i, &b) in offdiag.iter().enumerate() {
        m[(i, i + 1)] = b;
        m[(i + 1, i)] = b;
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("Jacobi matrix eigen-decomposition did not converge".into()))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    Ok(values)
}

/// Gauss-Laguerre nodes and weights of the given order for x^ν e^{−x}.
pub fn gauss_laguerre(order: usize, nu: f64) -> Result<QuadratureRule> {
    if order == 0 {
        return domain("quadrature order must be at least 1");
    }
    if !(nu > -1.0) || !nu.is_finite() {
        return domain(format!("weight exponent must satisfy nu > -1, got {nu}"));
    }
    let diag: Vec<f64> = (0..order).map(|k| 2.0 * k as f64 + nu + 1.0).collect();
    let offdiag: Vec<f64> = (1..order).map(|k| (k as f64 * (k as f64 + nu)).sqrt()).collect();
    let mut nodes = jacobi_eigenvalues(&diag, &offdiag)?;

    let n = order as f64;
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (ln, lm) = laguerre_pair(order, nu, *x);
            // L_n' = (n L_n − (n+ν) L_{n−1}) / x
            let deriv = (n * ln - (n + nu) * lm) / *x;
            if deriv == 0.0 {
                break;
            }
            let step = ln / deriv;
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
    }

    // wᵢ = Γ(n+ν+1) xᵢ / (n! (n+1)² L_{n+1}^ν(xᵢ)²)
    let log_prefactor = log_gamma(n + nu + 1.0)? - log_gamma(n + 1.0)? - 2.0 * (n + 1.0).ln();
    let weights = nodes
        .iter()
        .map(|&x| {
            let (lnext, _) = laguerre_pair(order + 1, nu, x);
            (log_prefactor + x.ln() - 2.0 * lnext.abs().ln()).exp()
        })
        .collect();

    Ok(QuadratureRule { order, weight_exponent: nu, nodes, weights })
}

/// Gauss-Legendre rule on [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

impl GaussLegendre {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return domain("quadrature order must be at least 1");
        }
        let diag = vec![0.0; order];
        let offdiag: Vec<f64> = (1..order)
            .map(|k| {
                let k = k as f64;
                k / (4.0 * k * k - 1.0).sqrt()
            })
            .collect();
        let mut nodes = jacobi_eigenvalues(&diag, &offdiag)?;
        let n = order as f64;
        let mut weights = Vec::with_capacity(order);
        // P_n' = n (x P_n − P_{n−1}) / (x² − 1)
        let deriv = |x: f64| {
            let (p, pm) = legendre_pair(order, x);
            (p, n * (x * p - pm) / (x * x - 1.0))
        };
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, d) = deriv(*x);
                *x -= p / d;
            }
            let (_, d) = deriv(*x);
            weights.push(2.0 / ((1.0 - *x * *x) * d * d));
        }
        Ok(Self { nodes, weights })
    }

    /// ∫_a^b f(x) dx.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(mid + half * t)).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn one_point_rule() {
        let rule = gauss_laguerre(1, 0.0).unwrap();
        assert_relative_eq!(rule.nodes[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(rule.weights[0], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn two_point_rule_closed_form() {
        let rule = gauss_laguerre(2, 0.0).unwrap();
        let s = 2f64.sqrt();
        assert_relative_eq!(rule.nodes[0], 2.0 - s, max_relative = 1e-14);
        assert_relative_eq!(rule.nodes[1], 2.0 + s, max_relative = 1e-14);
        assert_relative_eq!(rule.weights[0], (2.0 + s) / 4.0, max_relative = 1e-14);
        assert_relative_eq!(rule.weights[1], (2.0 - s) / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn zeroth_moment() {
        let rule = gauss_laguerre(20, 0.7).unwrap();
        let total: f64 = rule.weights.iter().sum();
        // Γ(1.7)
        assert_relative_eq!(total, 0.908_638_732_853_290_449_98, max_relative = 1e-12);
    }

    #[test]
    fn moments_are_exact_up_to_degree() {
        for &nu in &[-0.5, 0.0, 1.3, 4.0] {
            let rule = gauss_laguerre(12, nu).unwrap();
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(rule.nodes[0] > 0.0);
            for k in 0..=rule.exact_degree() {
                let exact = log_gamma(nu + 1.0 + k as f64).unwrap().exp();
                let got = rule.integrate(|x| x.powi(k as i32));
                assert_relative_eq!(got, exact, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = GaussLegendre::new(10).unwrap();
        for k in 0..20 {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(k));
            assert!((got - exact).abs() < 1e-14, "k={k}: {got}");
        }
        assert_relative_eq!(rule.integrate(0.0, 2.0, |x| x.exp()), 2f64.exp() - 1.0, max_relative = 1e-14);
    }

    #[test]
    fn invalid_arguments() {
        assert!(gauss_laguerre(0, 0.0).is_err());
        assert!(gauss_laguerre(4, -1.0).is_err());
        assert!(GaussLegendre::new(0).is_err());
    }
}
