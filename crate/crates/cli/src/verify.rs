//! Invariant suites run by the `verify` subcommand.

use clap::ValueEnum;
use dirac_morse::bound::{bound_spinor, degeneracy_partner, spectrum, upper_residual, Branch};
use dirac_morse::model::ModelParams;
use dirac_morse::scatter::expansion_coefficients;
use dirac_morse::specfun::{
    cdh_3f2, cdh_recursion, cdh_weight, gauss_laguerre, hyp1f1_terminating, laguerre, laguerre_x_ddx, log_gamma,
    CdhArgs, GaussLegendre,
};
use dirac_morse::tridiag::{
    matrix_element_analytic, quadrature_matrix, recursion_coefficients, BasisParams, CoefficientView,
};
use dirac_morse::Result;
use serde::Serialize;

/// Offset added to ζ by the fault-injection hook.
pub const FAULT_ZETA_SHIFT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Tridiagonality,
    Cdh,
    Laguerre,
    Degeneracy,
    Bound,
    Limits,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Tridiagonality, Suite::Cdh, Suite::Laguerre, Suite::Degeneracy, Suite::Bound, Suite::Limits];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tridiagonality => "tridiagonality",
            Suite::Cdh => "cdh",
            Suite::Laguerre => "laguerre",
            Suite::Degeneracy => "degeneracy",
            Suite::Bound => "bound",
            Suite::Limits => "limits",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub check: &'static str,
    /// Measured worst-case deviation; NaN when the check could not be evaluated.
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: String,
}

impl Check {
    fn new(suite: Suite, check: &'static str, measured: Result<f64>, tolerance: f64) -> Self {
        let (measured, note) = match measured {
            Ok(v) => (v, String::new()),
            Err(e) => (f64::NAN, e.to_string()),
        };
        Self { suite: suite.name(), check, measured, tolerance, pass: measured <= tolerance, note }
    }

    /// One report line.
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "[{status}] {}/{}: measured {:.3e} (tolerance {:.1e})",
            self.suite, self.check, self.measured, self.tolerance
        );
        if !self.note.is_empty() {
            s.push_str(&format!(": {}", self.note));
        }
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub alpha: f64,
    pub inject_fault: bool,
}

pub fn run(params: &ModelParams, suites: &[Suite], opts: VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    for &suite in Suite::ALL.iter().filter(|s| suites.contains(s)) {
        match suite {
            Suite::Tridiagonality => tridiagonality(params, opts, &mut out),
            Suite::Cdh => cdh(&mut out),
            Suite::Laguerre => laguerre_suite(&mut out),
            Suite::Degeneracy => degeneracy(params, &mut out),
            Suite::Bound => bound(params, &mut out),
            Suite::Limits => limits(params, &mut out),
        }
    }
    out
}

const ENERGIES: [f64; 3] = [0.3, 1.25, 2.0];
const SIZE: usize = 11;
const ORDER: usize = 24;

fn both_signs(params: &ModelParams) -> [ModelParams; 2] {
    [*params, params.with_flipped_a()]
}

fn tridiagonality(params: &ModelParams, opts: VerifyOptions, out: &mut Vec<Check>) {
    let off_band = || -> Result<f64> {
        let mut worst = 0.0f64;
        for p in both_signs(params) {
            for &eps in &ENERGIES {
                let mut bp = BasisParams::balanced(&p, eps, opts.alpha)?;
                if opts.inject_fault {
                    bp = bp.with_zeta(bp.zeta() + FAULT_ZETA_SHIFT);
                }
                let q = quadrature_matrix(&p, &bp, eps, SIZE, ORDER)?;
                for n in 0..SIZE {
                    for m in 0..SIZE {
                        if n.abs_diff(m) >= 2 {
                            let scale = q[(n, n)].abs().max(q[(m, m)].abs());
                            worst = worst.max(q[(n, m)].abs() / scale);
                        }
                    }
                }
            }
        }
        Ok(worst)
    };
    let value = off_band();
    out.push(Check::new(Suite::Tridiagonality, "quadrature elements vanish off the band", value, 1e-10));

    let band = || -> Result<f64> {
        let mut worst = 0.0f64;
        for p in both_signs(params) {
            for &eps in &ENERGIES {
                let bp = BasisParams::balanced(&p, eps, opts.alpha)?;
                let q = quadrature_matrix(&p, &bp, eps, SIZE, ORDER)?;
                for n in 0..SIZE {
                    for m in n.saturating_sub(1)..(n + 2).min(SIZE) {
                        let scale = q[(n, n)].abs().max(q[(m, m)].abs());
                        let a = matrix_element_analytic(&p, &bp, eps, n, m)?;
                        worst = worst.max((q[(n, m)] - a).abs() / a.abs().max(1e-3 * scale));
                    }
                }
            }
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Tridiagonality, "band elements match closed form", band(), 1e-8));

    let recursion = || -> Result<f64> {
        let mut worst = 0.0f64;
        // generic energies avoid integer n + α + b, where the recursion terminates
        for &eps in &[1.2371, 2.0713] {
            let f = expansion_coefficients(params, eps, opts.alpha, 42)?;
            let bp = BasisParams::balanced(params, eps, opts.alpha)?;
            for n in 0..=40 {
                let rc = recursion_coefficients(params, &bp, eps, n, CoefficientView::Expansion)?;
                let prev = if n == 0 { 0.0 } else { f[n - 1] };
                let terms = [rc.diag * f[n], rc.sub * prev, rc.sup * f[n + 1]];
                let scale: f64 = terms.iter().map(|t| t.abs()).sum();
                worst = worst.max((terms[0] - terms[1] - terms[2]).abs() / scale);
            }
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Tridiagonality, "expansion coefficients obey the recursion", recursion(), 1e-9));
}

fn cdh(out: &mut Vec<Check>) {
    let dual = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &lambda in &[0.3, 1.0, 2.5] {
            for &(a, b) in &[(0.5, -0.6), (1.7, 0.4), (0.5, 2.2)] {
                for &y2 in &[-1.5, 0.0, 0.7, 5.0, 30.0] {
                    let args = CdhArgs::new(lambda, a, b, y2)?;
                    for (n, r) in cdh_recursion(&args, 25)?.iter().enumerate() {
                        let exact = cdh_3f2(&args, n)?;
                        worst = worst.max((r - exact).abs() / exact.abs());
                    }
                }
            }
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Cdh, "recursion equals hypergeometric sum", dual(), 1e-10));

    let orthogonality = || -> Result<f64> {
        let rule = GaussLegendre::new(20)?;
        let mut worst = 0.0f64;
        for &(lambda, a, b) in &[(1.0, 1.0, 1.0), (0.7, 1.3, 0.4), (1.5, 0.8, 2.0)] {
            let top = 6;
            let norm = |n: usize| -> Result<f64> {
                let k = n as f64;
                Ok((log_gamma(k + 1.0)? + log_gamma(k + a + b)?
                    - log_gamma(k + lambda + a)?
                    - log_gamma(k + lambda + b)?)
                .exp())
            };
            let mut gram = vec![vec![0.0; top + 1]; top + 1];
            // unit panels out to where the weight has decayed like e^{−πy}
            for panel in 0..60 {
                let (lo, hi) = (panel as f64, panel as f64 + 1.0);
                let mut err = None;
                let mut acc = vec![vec![0.0; top + 1]; top + 1];
                for (n, row) in acc.iter_mut().enumerate() {
                    for (m, cell) in row.iter_mut().enumerate().skip(n) {
                        *cell = rule.integrate(lo, hi, |y| {
                            let eval = || -> Result<f64> {
                                let s = cdh_recursion(&CdhArgs::new(lambda, a, b, y * y)?, top)?;
                                Ok(cdh_weight(lambda, a, b, y)? * s[n] * s[m])
                            };
                            eval().unwrap_or_else(|e| {
                                err = Some(e);
                                0.0
                            })
                        });
                    }
                }
                if let Some(e) = err {
                    return Err(e);
                }
                for (g, a) in gram.iter_mut().flatten().zip(acc.iter().flatten()) {
                    *g += a;
                }
            }
            for (n, row) in gram.iter().enumerate() {
                for (m, value) in row.iter().enumerate().skip(n) {
                    let expect = if n == m { norm(n)? } else { 0.0 };
                    worst = worst.max((value - expect).abs() / (norm(n)? * norm(m)?).sqrt());
                }
            }
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Cdh, "orthogonality under the dual Hahn weight", orthogonality(), 1e-10));
}

fn laguerre_suite(out: &mut Vec<Check>) {
    let l = |n: i64, nu: f64, x: f64| -> Result<f64> {
        if n < 0 {
            Ok(0.0)
        } else {
            laguerre(n as usize, nu, x)
        }
    };
    let rel = |terms: &[f64]| terms.iter().sum::<f64>().abs() / terms.iter().map(|t| t.abs()).sum::<f64>();
    let identities = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &nu in &[-0.5, 0.0, 0.6, 2.4] {
            for n in 0..=15i64 {
                let k = n as f64;
                for &x in &[0.2, 1.0, 3.5, 9.0, 20.0] {
                    worst = worst.max(rel(&[
                        -x * l(n, nu, x)?,
                        (2.0 * k + nu + 1.0) * l(n, nu, x)?,
                        -(k + nu) * l(n - 1, nu, x)?,
                        -(k + 1.0) * l(n + 1, nu, x)?,
                    ]));
                    worst = worst.max(rel(&[-l(n, nu, x)?, l(n, nu + 1.0, x)?, -l(n - 1, nu + 1.0, x)?]));
                    worst = worst.max(rel(&[laguerre_x_ddx(n as usize, nu, x)?, x * l(n - 1, nu + 1.0, x)?]));
                    let prefactor = (log_gamma(k + nu + 1.0)? - log_gamma(k + 1.0)? - log_gamma(nu + 1.0)?).exp();
                    let (sum, abs_sum) = hyp1f1_terminating(n as usize, nu + 1.0, x);
                    worst = worst.max((prefactor * sum - l(n, nu, x)?).abs() / (prefactor * abs_sum));
                }
            }
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Laguerre, "recurrences, derivative and confluent form", identities(), 1e-11));

    let orthogonality = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &nu in &[-0.5, 0.0, 0.6, 2.4] {
            let rule = gauss_laguerre(20, nu)?;
            let norm =
                |n: usize| -> Result<f64> { Ok((log_gamma(n as f64 + nu + 1.0)? - log_gamma(n as f64 + 1.0)?).exp()) };
            for n in 0..=15usize {
                for m in 0..=15usize {
                    let v = rule
                        .integrate(|x| l(n as i64, nu, x).unwrap_or(f64::NAN) * l(m as i64, nu, x).unwrap_or(f64::NAN));
                    let v = v / (norm(n)? * norm(m)?).sqrt();
                    worst = worst.max((v - if n == m { 1.0 } else { 0.0 }).abs());
                }
            }
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Laguerre, "orthogonality under Gauss-Laguerre", orthogonality(), 1e-10));
}

fn degeneracy(params: &ModelParams, out: &mut Vec<Check>) {
    let (neg, pos) =
        if params.a() < 0.0 { (*params, params.with_flipped_a()) } else { (params.with_flipped_a(), *params) };
    let mirrored = || -> Result<f64> {
        let mut worst = 0.0f64;
        let pos_states = spectrum(&pos);
        for st in spectrum(&neg) {
            let partner = degeneracy_partner(&neg, &st)?;
            let direct = pos_states
                .iter()
                .find(|s| s.n == st.n + 1 && s.branch == st.branch.opposite())
                .ok_or_else(|| dirac_morse::Error::NoPartner(format!("level {} missing for A > 0", st.n + 1)))?;
            worst = worst.max((st.epsilon + direct.epsilon).abs()).max((partner.epsilon - direct.epsilon).abs());
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Degeneracy, "A < 0 levels mirror shifted A > 0 levels", mirrored(), 1e-15));

    let unpaired = spectrum(&pos).iter().filter(|s| degeneracy_partner(&pos, s).is_err()).count();
    out.push(Check::new(Suite::Degeneracy, "two unpaired A > 0 states", Ok((unpaired as f64 - 2.0).abs()), 0.0));
}

fn bound(params: &ModelParams, out: &mut Vec<Check>) {
    let valid: Vec<_> = spectrum(params).into_iter().filter(|s| s.valid && s.n <= 10).collect();
    let zs: Vec<f64> = (0..=200).map(|i| 0.05 + 39.95 * i as f64 / 200.0).collect();

    let residual = || -> Result<f64> {
        let mut worst = 0.0f64;
        for st in &valid {
            for &z in &zs {
                let (r, scale) = upper_residual(params, st, z)?;
                if scale > 0.0 {
                    worst = worst.max(r.abs() / scale);
                }
            }
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Bound, "upper component solves the wave equation", residual(), 1e-10));

    let norm = || -> Result<f64> {
        // ∫ φ⁺² dx = ∫ φ⁺² dz / (ωz) on Gauss-Laguerre nodes with weight z^{2α−1} e^{−z}
        let mut worst = 0.0f64;
        for st in &valid {
            let nu = 2.0 * st.alpha_n - 1.0;
            let rule = gauss_laguerre(st.n + 12, nu)?;
            let mut err = None;
            let total = rule.integrate(|z| match bound_spinor(params, st, z) {
                Ok(s) => s.upper * s.upper / (params.omega() * z) / (nu * z.ln() - z).exp(),
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            worst = worst.max((total - 1.0).abs());
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Bound, "upper components have unit norm", norm(), 1e-10));

    let balance = || -> Result<f64> {
        let mut worst = 0.0f64;
        for st in &valid {
            let upper = |x: f64| bound_spinor(params, st, params.z_of_x(x)).map_or(f64::NAN, |s| s.upper);
            let lowers = zs.iter().map(|&z| Ok(bound_spinor(params, st, z)?.lower)).collect::<Result<Vec<f64>>>()?;
            let scale = lowers.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (&z, &lower) in zs.iter().zip(&lowers) {
                let numeric = params.kinetic_balance_apply(st.epsilon, upper, params.x_of_z(z)?)?;
                worst = worst.max((numeric - lower).abs() / scale);
            }
        }
        Ok(worst)
    };
    out.push(Check::new(Suite::Bound, "lower component is the kinetic-balance image", balance(), 1e-6));
}

fn limits(params: &ModelParams, out: &mut Vec<Check>) {
    let ground = || -> Result<f64> {
        let pos = if params.a() > 0.0 { *params } else { params.with_flipped_a() };
        let s = spectrum(&pos);
        let find = |b: Branch| s.iter().find(|st| st.n == 0 && st.branch == b).map(|st| st.epsilon);
        match (find(Branch::Plus), find(Branch::Minus)) {
            (Some(p), Some(m)) => Ok((p - pos.c()).abs().max((m + pos.c()).abs())),
            _ => Err(dirac_morse::Error::Numeric("no n = 0 level".into())),
        }
    };
    out.push(Check::new(Suite::Limits, "ground pair sits at +-C", ground(), 0.0));

    let (omega, xi) = (params.omega(), params.xi());
    let order = || -> Result<f64> {
        let err = |lam: f64| -> Result<f64> {
            let p = ModelParams::new(params.a().abs(), omega, xi, lam)?;
            let st = spectrum(&p)
                .into_iter()
                .find(|s| s.n == 1 && s.branch == Branch::Plus)
                .ok_or_else(|| dirac_morse::Error::Numeric("no n = 1 level".into()))?;
            let target = -0.5 * omega * omega * (xi / omega - 1.0).powi(2);
            Ok(((st.epsilon - 1.0) / (lam * lam) - target).abs())
        };
        // deficit of the observed convergence order below 2
        Ok((2.0 - (err(1e-2)? / err(1e-3)?).log10()).max(0.0))
    };
    out.push(Check::new(
        Suite::Limits,
        "levels approach the Schroedinger-Morse spectrum at second order",
        order(),
        0.1,
    ));
}
