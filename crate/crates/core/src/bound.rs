//! Discrete spectrum, state exponents and bound spinors.
//!
//! For A > 0 the energies are εₙ^± / C = λ̃²ξωn ± √(1 − (λ̃Cωn)²) with
//! n = 0..=n_max; the A < 0 spectrum is the mirror image εₙ^±|_{A<0} =
//! −ε_{n+1}^∓|_{A>0} and has one fewer level per branch.
//!
//! The upper component of state n is z^{αₙ} e^{−z/2} L_n^{2αₙ}(z). At n = 0
//! this is the familiar z^{α₀} e^{−z/2}; for n ≥ 1 the Laguerre parameter must
//! be 2αₙ (not 2αₙ − 1) for the function to solve the upper-component
//! equation, see `lowered_parameter_is_not_an_eigenfunction` below.

use crate::error::{domain, Error, Result};
use crate::model::{ASign, ModelParams, SpinorSample};
use crate::specfun::{laguerre_pair, log_gamma};

/// The ± of the square root in the energy formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub n: usize,
    pub branch: Branch,
    pub epsilon: f64,
    pub alpha_n: f64,
    /// αₙ > 0, i.e. the upper component is square integrable.
    pub valid: bool,
}

/// ⌊1/(λ̃Cω)⌋.
pub fn n_max(params: &ModelParams) -> usize {
    let inv = 1.0 / (params.lambda_c() * params.c() * params.omega());
    inv.floor() as usize
}

/// C·(λ̃²ξωm ± √(1 − (λ̃Cωm)²)), the A > 0 energy of level m.
fn positive_a_energy(params: &ModelParams, m: usize, branch: Branch) -> f64 {
    let lam = params.lambda_c();
    let m = m as f64;
    let lcw = lam * params.c() * params.omega() * m;
    let root = ((1.0 - lcw) * (1.0 + lcw)).max(0.0).sqrt();
    params.c() * (lam * lam * params.xi() * params.omega() * m + branch.sign() * root)
}

/// (ξ/Cω)ε − n for A > 0, −(ξ/Cω)ε − n − 1 for A < 0.
pub fn alpha_n(params: &ModelParams, n: usize, epsilon: f64) -> f64 {
    let k = params.kappa() * epsilon;
    match params.a_sign() {
        ASign::Positive => k - n as f64,
        ASign::Negative => -k - n as f64 - 1.0,
    }
}

fn make_state(params: &ModelParams, n: usize, branch: Branch) -> BoundState {
    let epsilon = match params.a_sign() {
        ASign::Positive => positive_a_energy(params, n, branch),
        ASign::Negative => -positive_a_energy(params, n + 1, branch.opposite()),
    };
    let alpha = alpha_n(params, n, epsilon);
    BoundState { n, branch, epsilon, alpha_n: alpha, valid: alpha > 0.0 }
}

fn level_count(params: &ModelParams) -> usize {
    match params.a_sign() {
        ASign::Positive => n_max(params) + 1,
        ASign::Negative => n_max(params),
    }
}

/// Both branches of every level, sorted by (n, branch). States with αₙ ≤ 0
/// are kept and flagged invalid.
pub fn spectrum(params: &ModelParams) -> Vec<BoundState> {
    (0..level_count(params)).flat_map(|n| [Branch::Plus, Branch::Minus].map(|b| make_state(params, n, b))).collect()
}

/// The state of the A → −A problem with the negated energy.
pub fn degeneracy_partner(params: &ModelParams, state: &BoundState) -> Result<BoundState> {
    let flipped = params.with_flipped_a();
    let n = match params.a_sign() {
        ASign::Negative => state.n + 1,
        ASign::Positive => state.n.checked_sub(1).ok_or_else(|| {
            Error::NoPartner(format!("the n = 0 {:?} state of the A > 0 problem is unpaired", state.branch))
        })?,
    };
    if n >= level_count(&flipped) {
        return Err(Error::NoPartner(format!("level {n} exceeds the partner spectrum")));
    }
    Ok(make_state(&flipped, n, state.branch.opposite()))
}

/// Bound states from the two tridiagonal termination conditions n + α + b(ε) = 0
/// and y(ε)² = −α², solved as roots of g(ε) = y² + (n + b)² by bisection.
pub fn diagonalization_spectrum(params: &ModelParams) -> Vec<BoundState> {
    let lw = params.lambda_c() * params.omega();
    let kappa = params.kappa();
    // n + b(ε) = shift + slope·ε
    let (slope, offset) = match params.a_sign() {
        ASign::Positive => (-kappa, 0.0),
        ASign::Negative => (kappa, 1.0),
    };
    let g = |n: usize, eps: f64| {
        let t = n as f64 + offset + slope * eps;
        (eps - 1.0) * (eps + 1.0) / (lw * lw) + t * t
    };
    let mut out = Vec::new();
    for n in 0.. {
        let shift = n as f64 + offset;
        // g is a convex quadratic; its minimum separates the two roots
        let lead = 1.0 / (lw * lw) + slope * slope;
        let vertex = -shift * slope / lead;
        let g_min = g(n, vertex);
        let tol = 8.0 * f64::EPSILON * (1.0 / (lw * lw) + shift * shift);
        if g_min > tol {
            break;
        }
        let (lower, upper) = if g_min >= 0.0 {
            (vertex, vertex)
        } else {
            // roots need ε² ≤ 1
            (bisect(|e| g(n, e), -1.0, vertex), bisect(|e| g(n, e), vertex, 1.0))
        };
        for (branch, epsilon) in [(Branch::Plus, upper), (Branch::Minus, lower)] {
            let alpha = -(shift + slope * epsilon);
            out.push(BoundState { n, branch, epsilon, alpha_n: alpha, valid: alpha > 0.0 });
        }
    }
    out
}

/// Root of f on [a, b] given a sign change, refined until the bracket stops shrinking.
fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Normalization √(2αω n! / Γ(n+2α+1)) of the upper component in dx.
fn spinor_norm(params: &ModelParams, n: usize, alpha: f64) -> Result<f64> {
    let nf = n as f64;
    let log = (2.0 * alpha * params.omega()).ln() + log_gamma(nf + 1.0)? - log_gamma(nf + 2.0 * alpha + 1.0)?;
    Ok((0.5 * log).exp())
}

fn check_state(params: &ModelParams, state: &BoundState, z: f64) -> Result<()> {
    if !state.valid || !(state.alpha_n > 0.0) {
        return domain(format!("state n = {} has alpha_n = {} <= 0", state.n, state.alpha_n));
    }
    if !(z > 0.0) {
        return domain(format!("z must be positive, got {z}"));
    }
    params.check_not_pole(state.epsilon)
}

/// (φ⁺, φ⁻) of a bound state at z, with φ⁺ unit-normalized in dx.
///
/// The lower component is the kinetic-balance image of the upper one,
/// −λ̃ω/(C+ε) · N z^α e^{−z/2} {(α + ξ/ω) L_n^{2α} − z L_{n−1}^{2α+1}} for A > 0,
/// with −z L_n^{2α+1} in place of the last term for A < 0.
pub fn bound_spinor(params: &ModelParams, state: &BoundState, z: f64) -> Result<SpinorSample> {
    check_state(params, state, z)?;
    let alpha = state.alpha_n;
    let nu = 2.0 * alpha;
    let n = state.n;
    let envelope = spinor_norm(params, n, alpha)? * (alpha * z.ln() - 0.5 * z).exp();
    let (l_n, _) = laguerre_pair(n, nu, z);
    let (l1_n, l1_nm1) = laguerre_pair(n, nu + 1.0, z);
    let tail = match params.a_sign() {
        ASign::Positive => l1_nm1,
        ASign::Negative => l1_n,
    };
    let bracket = (alpha + params.xi() / params.omega()) * l_n - z * tail;
    let prefactor = -params.lambda_c() * params.omega() / (params.c() + state.epsilon);
    Ok(SpinorSample::rotated(envelope * l_n, prefactor * envelope * bracket))
}

/// Pointwise residual of the upper-component equation −φ″ + U(x)φ at z,
/// with φ″ from the Laguerre differential equation. Returns (residual, |φ″| + |Uφ|).
pub fn upper_residual(params: &ModelParams, state: &BoundState, z: f64) -> Result<(f64, f64)> {
    check_state(params, state, z)?;
    let alpha = state.alpha_n;
    let nu = 2.0 * alpha;
    let n = state.n as f64;
    let (l, lm) = laguerre_pair(state.n, nu, z);
    // D = z d/dz: DL = nL − (n+ν)L_{n−1}, D²L = (z−ν)DL − nzL
    let dl = n * l - (n + nu) * lm;
    let d2l = (z - nu) * dl - n * z * l;
    let a = alpha - 0.5 * z;
    let d2 = a * a * l + 2.0 * a * dl - 0.5 * z * l + d2l;
    let envelope = spinor_norm(params, state.n, alpha)? * (alpha * z.ln() - 0.5 * z).exp();
    let phi = envelope * l;
    let phi_xx = params.omega().powi(2) * envelope * d2;
    let x = params.x_of_z(z)?;
    let u_phi = params.schrodinger_coeffs(state.epsilon).effective_potential(x) * phi;
    Ok((u_phi - phi_xx, phi_xx.abs() + u_phi.abs()))
}
