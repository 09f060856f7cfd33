//! Scattering solutions (|ε| > 1) as series over the kinetic-balanced spinor basis.
//!
//! With μ = ξ/ω and τ = (ω/2)/(C+ε) the expansion coefficients are
//! fₙ = √(Γ(n+2α)/n!) S_n^α(y²; α, b) with y² = (ε²−1)/(λ̃ω)² and
//! b = −(ξ/Cω)ε for A > 0, 1 + (ξ/Cω)ε for A < 0.

use crate::error::{domain, Error, Result};
use crate::model::{ASign, ModelParams, SpinorSample};
use crate::specfun::{cdh_recursion, cdh_weight, log_gamma, log_weight_any, CdhArgs};
use crate::tridiag::{basis_sequence, recursion_coefficients, BasisParams, CoefficientView};

/// Default series length.
pub const DEFAULT_TERMS: usize = 64;

/// Closest approach to |ε| = 1 for which the normalization is still evaluated.
pub const THRESHOLD_GUARD: f64 = 1e-12;

/// μ = ξ/ω, τ = (ω/2)/(C+ε).
pub fn balanced_params(params: &ModelParams, epsilon: f64) -> Result<(f64, f64)> {
    params.check_not_pole(epsilon)?;
    Ok((params.xi() / params.omega(), 0.5 * params.omega() / (params.c() + epsilon)))
}

/// (λ, a, b, y²) = (α, α, b(ε), y(ε)²). Defined for any ε; y² < 0 inside the gap.
pub fn cdh_args_of_energy(params: &ModelParams, epsilon: f64, alpha: f64) -> Result<CdhArgs> {
    let lw = params.lambda_c() * params.omega();
    let y2 = (epsilon - 1.0) * (epsilon + 1.0) / (lw * lw);
    let k = params.kappa() * epsilon;
    let b = match params.a_sign() {
        ASign::Positive => -k,
        ASign::Negative => 1.0 + k,
    };
    CdhArgs::new(alpha, alpha, b, y2)
}

fn check_scattering(epsilon: f64) -> Result<()> {
    if !(epsilon.abs() > 1.0) {
        return domain(format!("scattering energies need |epsilon| > 1, got {epsilon}"));
    }
    Ok(())
}

/// √(Γ(n+2α)/n!) for n = 0..len.
fn gamma_ratios(alpha: f64, len: usize) -> Result<Vec<f64>> {
    (0..len)
        .map(|n| {
            let n = n as f64;
            Ok((0.5 * (log_gamma(n + 2.0 * alpha)? - log_gamma(n + 1.0)?)).exp())
        })
        .collect()
}

/// f₀, …, f_{n_terms−1}.
pub fn expansion_coefficients(params: &ModelParams, epsilon: f64, alpha: f64, n_terms: usize) -> Result<Vec<f64>> {
    check_scattering(epsilon)?;
    if n_terms == 0 {
        return domain("n_terms must be at least 1");
    }
    let args = cdh_args_of_energy(params, epsilon, alpha)?;
    let s = cdh_recursion(&args, n_terms - 1)?;
    Ok(gamma_ratios(alpha, n_terms)?.iter().zip(&s).map(|(g, s)| g * s).collect())
}

/// Energy normalization √(ρ^α(y) |dy/dε|).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub value: f64,
    pub dy_depsilon: f64,
    /// b ≤ 0: the weight is evaluated outside its positive-measure regime.
    pub weight_warning: bool,
}

pub fn normalization(params: &ModelParams, epsilon: f64, alpha: f64) -> Result<Normalization> {
    check_scattering(epsilon)?;
    let gap = epsilon.abs() - 1.0;
    if gap < THRESHOLD_GUARD {
        return Err(Error::ThresholdDivergence(gap));
    }
    let lw = params.lambda_c() * params.omega();
    let root = ((epsilon - 1.0) * (epsilon + 1.0)).sqrt();
    let dy_depsilon = epsilon / (lw * root);
    let args = cdh_args_of_energy(params, epsilon, alpha)?;
    let y = args.y2.sqrt();
    let weight_warning = args.b <= 0.0;
    let rho = if weight_warning {
        log_weight_any(alpha, alpha, args.b, y)?.exp()
    } else {
        cdh_weight(alpha, alpha, args.b, y)?
    };
    Ok(Normalization { value: (rho * dy_depsilon.abs()).sqrt(), dy_depsilon, weight_warning })
}

/// A truncated scattering series at one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSolution {
    pub params: ModelParams,
    pub epsilon: f64,
    pub alpha: f64,
    pub cdh: CdhArgs,
    pub n_terms: usize,
    pub coefficients: Vec<f64>,
    pub normalization: Normalization,
    pub basis: BasisParams,
}

impl ScatterSolution {
    pub fn new(params: &ModelParams, epsilon: f64, alpha: f64, n_terms: usize) -> Result<Self> {
        let coefficients = expansion_coefficients(params, epsilon, alpha, n_terms)?;
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Numeric(format!("expansion coefficients overflow at epsilon = {epsilon}")));
        }
        Ok(Self {
            params: *params,
            epsilon,
            alpha,
            cdh: cdh_args_of_energy(params, epsilon, alpha)?,
            n_terms,
            coefficients,
            normalization: normalization(params, epsilon, alpha)?,
            basis: BasisParams::balanced(params, epsilon, alpha)?,
        })
    }

    /// Σ fₙ ψₙ(x) without the energy normalization.
    pub fn spinor_unnormalized(&self, x: f64) -> Result<SpinorSample> {
        let z = self.params.z_of_x(x);
        let basis = basis_sequence(&self.params, &self.basis, self.n_terms - 1, z)?;
        let (upper, lower) = basis
            .iter()
            .zip(&self.coefficients)
            .fold((0.0, 0.0), |(u, l), (psi, f)| (u + f * psi.upper, l + f * psi.lower));
        Ok(SpinorSample::rotated(upper, lower))
    }

    pub fn spinor(&self, x: f64) -> Result<SpinorSample> {
        let s = self.spinor_unnormalized(x)?;
        let n = self.normalization.value;
        Ok(SpinorSample::rotated(n * s.upper, n * s.lower))
    }

    /// |f_{N−1}| · |ψ_{N−1}(x)|, the size of the last retained term.
    pub fn tail_estimate(&self, x: f64) -> Result<f64> {
        let z = self.params.z_of_x(x);
        let last = self.n_terms - 1;
        let psi = basis_sequence(&self.params, &self.basis, last, z)?[last];
        Ok(self.coefficients[last].abs() * psi.norm_sqr().sqrt())
    }
}

/// Normalized truncated series χ(x, ε) in the rotated frame.
pub fn wavefunction(params: &ModelParams, epsilon: f64, alpha: f64, n_terms: usize, x: f64) -> Result<SpinorSample> {
    ScatterSolution::new(params, epsilon, alpha, n_terms)?.spinor(x)
}

/// Σ √(Γ(n+2α)/n!) S_n^α(2E/ω²; α, −D/ω) φₙ(x), the nonrelativistic counterpart
/// of the upper component, with D from the parameter map at ε = 1 + λ̃²E.
pub fn nonrel_series(params: &ModelParams, energy: f64, alpha: f64, n_terms: usize, x: f64) -> Result<f64> {
    if !(energy > 0.0) {
        return domain(format!("nonrelativistic scattering needs E > 0, got {energy}"));
    }
    if n_terms == 0 {
        return domain("n_terms must be at least 1");
    }
    let omega = params.omega();
    let lam = params.lambda_c();
    let map = params.nonrel_map(1.0 + lam * lam * energy);
    let args = CdhArgs::new(alpha, alpha, -map.d / omega, 2.0 * energy / (omega * omega))?;
    let s = cdh_recursion(&args, n_terms - 1)?;
    let ratios = gamma_ratios(alpha, n_terms)?;
    let bp = BasisParams::new(params, alpha, 0.0, 1.0)?;
    let basis = basis_sequence(params, &bp, n_terms - 1, params.z_of_x(x))?;
    Ok(basis.iter().zip(ratios.iter().zip(&s)).map(|(psi, (g, s))| g * s * psi.upper).sum())
}

/// Q_{N−1}, …, Q_{N+len} of the normalized recursion, rescaled to unit maximum.
pub fn normalized_tail(params: &ModelParams, epsilon: f64, alpha: f64, big_n: usize, len: usize) -> Result<Vec<f64>> {
    if big_n == 0 {
        return domain("tail offset N must be at least 1");
    }
    let bp = BasisParams::balanced(params, epsilon, alpha)?;
    let start = big_n - 1;
    let end = big_n + len;
    let mut out = Vec::with_capacity(len + 2);
    let (mut prev, mut cur) = (0.0, 1.0);
    for n in 0..=end {
        if n >= start {
            out.push(cur);
        }
        if n == end {
            break;
        }
        let rc = recursion_coefficients(params, &bp, epsilon, n, CoefficientView::Normalized)?;
        if rc.sup == 0.0 {
            return Err(Error::DegenerateRecursion { n });
        }
        let next = (rc.diag * cur - rc.sub * prev) / rc.sup;
        prev = cur;
        cur = next;
        let size = cur.abs().max(prev.abs());
        if size > 1e200 {
            prev /= size;
            cur /= size;
            out.iter_mut().for_each(|v| *v /= size);
        }
    }
    let peak = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::Numeric("tail of the recursion vanished or overflowed".into()));
    }
    Ok(out.into_iter().map(|v| v / peak).collect())
}

/// max over n ∈ [0, window] of |2u Q̂ₙ − Q̂ₙ₋₁ − Q̂ₙ₊₁| with Q̂ₙ = Q_{N+n}
/// scaled to unit maximum and u = 1 − (y/N)²/2.
pub fn chebyshev_tail(params: &ModelParams, epsilon: f64, alpha: f64, big_n: usize, window: usize) -> Result<f64> {
    let q = normalized_tail(params, epsilon, alpha, big_n, window + 1)?;
    let y2 = cdh_args_of_energy(params, epsilon, alpha)?.y2;
    let u = 1.0 - 0.5 * y2 / (big_n as f64).powi(2);
    // q[k] holds Q_{N−1+k}
    Ok((1..=window + 1).map(|k| (2.0 * u * q[k] - q[k - 1] - q[k + 1]).abs()).fold(0.0, f64::max))
}
