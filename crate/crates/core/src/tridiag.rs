//! Laguerre spinor basis and the tridiagonal representation of H − ε.
//!
//! Basis elements in z are
//!
//! ```text
//! φₙ = Nₙ z^α e^{−z/2} L_n^{2α−1}(z),   Nₙ = √(ω n! / Γ(n+2α))
//! θₙ = −2λ̃τ (μ + ζz + z d/dz) φₙ
//! ```
//!
//! with ζ = ±1/2 for ±A > 0. Inner products use the measure dx = dz/(ωz).

use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};
use crate::model::{ASign, ModelParams, SpinorSample};
use crate::specfun::{gauss_laguerre, laguerre_pair, log_gamma, sequence_unchecked, CdhArgs};

/// Parameters of one spinor basis family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    alpha: f64,
    mu: f64,
    tau: f64,
    zeta: f64,
    a_sign: ASign,
}

impl BasisParams {
    /// ζ is fixed by the sign of A; β is always 1.
    pub fn new(params: &ModelParams, alpha: f64, mu: f64, tau: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return domain(format!("basis exponent alpha must be positive, got {alpha}"));
        }
        if !mu.is_finite() || !tau.is_finite() {
            return domain("basis parameters mu and tau must be finite");
        }
        let a_sign = params.a_sign();
        Ok(Self { alpha, mu, tau, zeta: 0.5 * a_sign.factor(), a_sign })
    }

    /// μ = ξ/ω and τ = (ω/2)/(C+ε), which make the basis obey kinetic balance.
    pub fn balanced(params: &ModelParams, epsilon: f64, alpha: f64) -> Result<Self> {
        let (mu, tau) = crate::scatter::balanced_params(params, epsilon)?;
        Self::new(params, alpha, mu, tau)
    }

    /// Same basis with ζ overridden. Any ζ ≠ ±1/2 breaks tridiagonality.
    pub fn with_zeta(self, zeta: f64) -> Self {
        Self { zeta, ..self }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn zeta(&self) -> f64 {
        self.zeta
    }
    pub fn beta(&self) -> f64 {
        1.0
    }
    pub fn a_sign(&self) -> ASign {
        self.a_sign
    }
    /// Laguerre parameter ν = 2α − 1.
    pub fn nu(&self) -> f64 {
        2.0 * self.alpha - 1.0
    }

    fn log_norm(&self, omega: f64, n: usize) -> f64 {
        let n = n as f64;
        // arguments are positive for α > 0
        0.5 * (omega.ln() + log_gamma(n + 1.0).unwrap_or(0.0) - log_gamma(n + 2.0 * self.alpha).unwrap_or(0.0))
    }

    /// Nₙ z^α e^{−z/2}.
    fn envelope(&self, omega: f64, n: usize, z: f64) -> f64 {
        (self.log_norm(omega, n) + self.alpha * z.ln() - 0.5 * z).exp()
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("z must be positive and finite, got {z}"));
    }
    Ok(())
}

/// φₙ(z).
pub fn phi_basis(params: &ModelParams, bp: &BasisParams, n: usize, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(bp.envelope(params.omega(), n, z) * laguerre_pair(n, bp.nu(), z).0)
}

/// θₙ(z) in closed form: −2λ̃τ Nₙ z^α e^{−z/2} {(μ+α) L_n^{2α−1} − z L_{n−1}^{2α}} for
/// A > 0 and with −z L_n^{2α} for A < 0. Assumes ζ = ±1/2.
pub fn theta_basis(params: &ModelParams, bp: &BasisParams, n: usize, z: f64) -> Result<f64> {
    check_z(z)?;
    let (l, _) = laguerre_pair(n, bp.nu(), z);
    let (l1, l1m) = laguerre_pair(n, bp.nu() + 1.0, z);
    let second = match bp.a_sign {
        ASign::Positive => l1m,
        ASign::Negative => l1,
    };
    let bracket = (bp.mu + bp.alpha) * l - z * second;
    Ok(-2.0 * params.lambda_c() * bp.tau * bp.envelope(params.omega(), n, z) * bracket)
}

/// The bracket of −2λ̃τ(μ + ζz + z d/dz)φₙ divided by Nₙ z^α e^{−z/2}, for any ζ.
fn operator_bracket(bp: &BasisParams, n: usize, z: f64) -> f64 {
    let (l, lm) = laguerre_pair(n, bp.nu(), z);
    let nf = n as f64;
    // z L′ = n L_n − (n+ν) L_{n−1}
    let z_dl = nf * l - (nf + bp.nu()) * lm;
    (bp.mu + bp.alpha + (bp.zeta - 0.5) * z) * l + z_dl
}

/// θₙ(z) = −2λ̃τ(μ + ζz + z d/dz)φₙ with the derivative taken analytically. Honors an overridden ζ.
pub fn theta_operator(params: &ModelParams, bp: &BasisParams, n: usize, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(-2.0 * params.lambda_c() * bp.tau * bp.envelope(params.omega(), n, z) * operator_bracket(bp, n, z))
}

/// ψ₀(z), …, ψ_{n_max}(z) in the rotated frame, from one pair of Laguerre sweeps.
pub fn basis_sequence(params: &ModelParams, bp: &BasisParams, n_max: usize, z: f64) -> Result<Vec<SpinorSample>> {
    check_z(z)?;
    let l = sequence_unchecked(n_max, bp.nu(), z);
    let l1 = sequence_unchecked(n_max, bp.nu() + 1.0, z);
    let lead = -2.0 * params.lambda_c() * bp.tau;
    Ok((0..=n_max)
        .map(|n| {
            let env = bp.envelope(params.omega(), n, z);
            let second = match bp.a_sign {
                ASign::Positive => n.checked_sub(1).map_or(0.0, |k| l1[k]),
                ASign::Negative => l1[n],
            };
            let bracket = (bp.mu + bp.alpha) * l[n] - z * second;
            SpinorSample::rotated(env * l[n], lead * env * bracket)
        })
        .collect())
}

/// p(ε) and q of the tridiagonal representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionParams {
    pub p: f64,
    pub q: f64,
}

impl RecursionParams {
    /// (q + ωξ/C)/p, the shift shared by b and the off-diagonal coefficients.
    fn shift(&self, params: &ModelParams) -> f64 {
        (self.q + params.omega() * params.xi() / params.c()) / self.p
    }
}

/// p = 4τ²(C + ε − ω/τ), q = 2τ(μω − ξ).
pub fn pq(params: &ModelParams, bp: &BasisParams, epsilon: f64) -> Result<RecursionParams> {
    if bp.tau == 0.0 {
        return Err(Error::DegenerateBasis);
    }
    let t = bp.tau;
    Ok(RecursionParams {
        p: 4.0 * t * t * (params.c() + epsilon - params.omega() / t),
        q: 2.0 * t * (bp.mu * params.omega() - params.xi()),
    })
}

/// Analytic ⟨ψₙ|H−ε|ψₘ⟩: the closed-form diagonal and first off-diagonal, zero beyond.
pub fn matrix_element_analytic(
    params: &ModelParams,
    bp: &BasisParams,
    epsilon: f64,
    n: usize,
    m: usize,
) -> Result<f64> {
    let (lo, hi) = if n <= m { (n, m) } else { (m, n) };
    if hi - lo >= 2 {
        return Ok(0.0);
    }
    let RecursionParams { p, q } = pq(params, bp, epsilon)?;
    let s = bp.a_sign.factor();
    let lam2 = params.lambda_c().powi(2);
    let wxc = params.omega() * params.xi() / params.c();
    let a = bp.alpha;
    let mu = bp.mu;
    if hi == lo {
        let k = n as f64;
        let bracket = 2.0 * k * k + 2.0 * k * (2.0 * a + s * mu - 0.5 * s) + (a + s * mu).powi(2) + (1.0 - s) * a;
        Ok(params.c()
            - epsilon
            - s * 2.0 * lam2 * wxc * (k + a)
            - s * 2.0 * lam2 * q * (k + a + s * mu)
            - lam2 * p * bracket)
    } else {
        let k = hi as f64;
        let root = (k * (k + 2.0 * a - 1.0)).sqrt();
        Ok(lam2 * root * (s * wxc + s * q + p * (k + a + s * mu - 0.5 * (1.0 + s))))
    }
}

/// Symmetric tridiagonal matrix of H − ε truncated to `size` basis elements.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub size: usize,
    /// (H−ε)ₙₙ.
    pub diag: Vec<f64>,
    /// (H−ε)ₙ,ₙ₋₁ for n = 1..size.
    pub offdiag: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn analytic(params: &ModelParams, bp: &BasisParams, epsilon: f64, size: usize) -> Result<Self> {
        let diag = (0..size).map(|n| matrix_element_analytic(params, bp, epsilon, n, n)).collect::<Result<Vec<_>>>()?;
        let offdiag =
            (1..size).map(|n| matrix_element_analytic(params, bp, epsilon, n, n - 1)).collect::<Result<Vec<_>>>()?;
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite matrix element".into()));
        }
        Ok(Self { size, diag, offdiag })
    }

    pub fn element(&self, n: usize, m: usize) -> f64 {
        match n.abs_diff(m) {
            0 => self.diag[n],
            1 => self.offdiag[n.max(m) - 1],
            _ => 0.0,
        }
    }

    /// (H−ε) v for a vector of expansion coefficients.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.size)
            .map(|n| {
                let mut acc = self.diag[n] * v[n];
                if n > 0 {
                    acc += self.offdiag[n - 1] * v[n - 1];
                }
                if n + 1 < self.size {
                    acc += self.offdiag[n] * v[n + 1];
                }
                acc
            })
            .collect()
    }
}

/// A matrix element integrated numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureElement {
    pub value: f64,
    /// Sum of the magnitudes of the individual inner-product terms.
    pub scale: f64,
    /// The rule is not exact for the polynomial integrand.
    pub under_integrated: bool,
}

struct NodeValues {
    weight: f64,
    z: f64,
    upper: Vec<f64>,
    lower: Vec<f64>,
}

/// Terms of the quadrature matrix element at every node: basis polynomial parts
/// times Nₙ, with the common z^{2α−1} e^{−z} carried by the rule.
fn node_values(params: &ModelParams, bp: &BasisParams, size: usize, order: usize) -> Result<Vec<NodeValues>> {
    let rule = gauss_laguerre(order, bp.nu())?;
    let lead = -2.0 * params.lambda_c() * bp.tau;
    let norms: Vec<f64> = (0..size).map(|n| bp.log_norm(params.omega(), n).exp()).collect();
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&z, &w)| NodeValues {
            weight: w,
            z,
            upper: (0..size).map(|n| norms[n] * laguerre_pair(n, bp.nu(), z).0).collect(),
            lower: (0..size).map(|n| lead * norms[n] * operator_bracket(bp, n, z)).collect(),
        })
        .collect())
}

fn assemble(
    params: &ModelParams,
    bp: &BasisParams,
    epsilon: f64,
    nodes: &[NodeValues],
    n: usize,
    m: usize,
) -> (f64, f64) {
    let s = bp.a_sign.factor();
    let lam = params.lambda_c();
    let c = params.c();
    let omega = params.omega();
    let (mut pp, mut pzp, mut tt, mut tp, mut tzp) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for v in nodes {
        let w = v.weight;
        pp += w * v.upper[n] * v.upper[m];
        pzp += w * v.z * v.upper[n] * v.upper[m];
        tt += w * v.lower[n] * v.lower[m];
        let cross = v.lower[n] * v.upper[m] + v.lower[m] * v.upper[n];
        tp += w * cross;
        tzp += w * v.z * cross;
    }
    let terms = [
        (c - epsilon) * pp,
        -s * lam * lam * (omega * params.xi() / c) * pzp,
        -(c + epsilon - omega / (bp.beta() * bp.tau)) * tt,
        lam * (bp.mu * omega - params.xi()) * tp,
        lam * omega * (bp.zeta - 0.5 * s) * tzp,
    ];
    let value: f64 = terms.iter().sum::<f64>() / omega;
    let scale: f64 = terms.iter().map(|t| t.abs()).sum::<f64>() / omega;
    (value, scale)
}

fn check_tau(bp: &BasisParams) -> Result<()> {
    if bp.tau == 0.0 {
        return Err(Error::DegenerateBasis);
    }
    Ok(())
}

/// ⟨ψₙ|H−ε|ψₘ⟩ assembled from inner products evaluated by Gauss-Laguerre quadrature.
///
/// The integrand is z^{2α−1} e^{−z} times a polynomial of degree n+m+2, so
/// the rule is exact once 2·order − 1 ≥ n + m + 2.
pub fn matrix_element_quadrature(
    params: &ModelParams,
    bp: &BasisParams,
    epsilon: f64,
    n: usize,
    m: usize,
    order: usize,
) -> Result<QuadratureElement> {
    check_tau(bp)?;
    let nodes = node_values(params, bp, n.max(m) + 1, order)?;
    let (value, scale) = assemble(params, bp, epsilon, &nodes, n, m);
    Ok(QuadratureElement { value, scale, under_integrated: 2 * order < n + m + 3 })
}

/// All quadrature elements for n, m < size from a single rule of the given order.
pub fn quadrature_matrix(
    params: &ModelParams,
    bp: &BasisParams,
    epsilon: f64,
    size: usize,
    order: usize,
) -> Result<DMatrix<f64>> {
    check_tau(bp)?;
    if size == 0 {
        return domain("matrix size must be at least 1");
    }
    if 2 * order < 2 * size + 1 {
        return domain(format!("order {order} cannot integrate a {size}x{size} block exactly"));
    }
    let nodes = node_values(params, bp, size, order)?;
    let mut out = DMatrix::zeros(size, size);
    for n in 0..size {
        for m in 0..=n {
            let (v, _) = assemble(params, bp, epsilon, &nodes, n, m);
            out[(n, m)] = v;
            out[(m, n)] = v;
        }
    }
    Ok(out)
}

/// Which normalization of the expansion coefficients the recursion acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientView {
    /// fₙ, the coefficients of ψₙ.
    Expansion,
    /// Qₙ = √(n!/Γ(n+2α)) fₙ.
    Normalized,
}

/// Coefficients of diag·cₙ − sub·cₙ₋₁ − sup·cₙ₊₁ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionCoefficients {
    pub diag: f64,
    pub sub: f64,
    pub sup: f64,
}

/// Three-term recursion obeyed by the expansion coefficients of a solution,
/// equal to the matrix elements divided by −λ̃²p.
pub fn recursion_coefficients(
    params: &ModelParams,
    bp: &BasisParams,
    epsilon: f64,
    n: usize,
    view: CoefficientView,
) -> Result<RecursionCoefficients> {
    let rp = pq(params, bp, epsilon)?;
    let RecursionParams { p, q } = rp;
    let t = bp.tau;
    let guard = 8.0 * f64::EPSILON * 4.0 * t * t * ((params.c() + epsilon).abs() + (params.omega() / t).abs());
    if p.abs() <= guard {
        return Err(Error::SingularRepresentation);
    }
    let s = bp.a_sign.factor();
    let a = bp.alpha;
    let mu = bp.mu;
    let r = rp.shift(params);
    let k = n as f64;
    let lam2 = params.lambda_c().powi(2);
    let diag = 2.0 * k * k
        + 2.0 * k * (2.0 * a + s * mu - 0.5 * s)
        + (a + s * mu).powi(2)
        + s * 2.0 * (k + a) * r
        + (1.0 - s) * a
        + 2.0 * mu * q / p
        + (epsilon - params.c()) / (lam2 * p);
    let sub_core = k - 0.5 * (1.0 + s) + a + s * mu + s * r;
    let sup_core = k + 0.5 * (1.0 - s) + a + s * mu + s * r;
    let (sub_w, sup_w) = match view {
        CoefficientView::Expansion => ((k * (k + 2.0 * a - 1.0)).sqrt(), ((k + 1.0) * (k + 2.0 * a)).sqrt()),
        CoefficientView::Normalized => (k, k + 2.0 * a),
    };
    Ok(RecursionCoefficients { diag, sub: sub_w * sub_core, sup: sup_w * sup_core })
}

/// Continuous dual Hahn arguments for which the normalized recursion coincides
/// with the polynomial recursion, for arbitrary μ and τ.
pub fn cdh_args_general(params: &ModelParams, bp: &BasisParams, epsilon: f64) -> Result<CdhArgs> {
    let rp = pq(params, bp, epsilon)?;
    if rp.p == 0.0 {
        return Err(Error::SingularRepresentation);
    }
    let r = rp.shift(params);
    let b = match bp.a_sign {
        ASign::Positive => bp.mu + r,
        ASign::Negative => 1.0 - bp.mu - r,
    };
    let y2 = (params.c() - epsilon) / (params.lambda_c().powi(2) * rp.p) - bp.mu * (bp.mu + 2.0 * rp.q / rp.p);
    CdhArgs::new(bp.alpha, bp.alpha, b, y2)
}
