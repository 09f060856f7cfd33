//! Problem definition for the Dirac equation with V(x) = −A e^{−ωx}.
//!
//! The spinor is rotated by the global unitary U = exp(i λ̃η σ₂ / 2) with
//! sin(λ̃η) = +λ̃ξ, which turns the equation for the upper component into a
//! Schrödinger-like one. Only this "top sign" branch is implemented; it is
//! the one whose upper component survives the nonrelativistic limit.

use crate::error::{domain, Error, Result};

/// Sign of the potential strength A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ASign {
    Positive,
    Negative,
}

impl ASign {
    /// +1 for A > 0, −1 for A < 0: the "top/bottom sign" of the formulas.
    pub fn factor(self) -> f64 {
        match self {
            ASign::Positive => 1.0,
            ASign::Negative => -1.0,
        }
    }
}

/// Physical inputs of one problem instance plus the derived rotation constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    a: f64,
    omega: f64,
    xi: f64,
    lambda_c: f64,
    c: f64,
    rot_angle: f64,
}

impl ModelParams {
    /// Rejects A = 0, ω ≤ 0, ξ ≤ 0, λ̃ ≤ 0 and λ̃ξ ≥ 1.
    pub fn new(a: f64, omega: f64, xi: f64, lambda_c: f64) -> Result<Self> {
        if !a.is_finite() || a == 0.0 {
            return domain(format!("potential strength A must be finite and nonzero, got {a}"));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return domain(format!("range parameter omega must be positive, got {omega}"));
        }
        if !(xi > 0.0) || !xi.is_finite() {
            return domain(format!("coupling scale xi must be positive, got {xi}"));
        }
        if !(lambda_c > 0.0) || !lambda_c.is_finite() {
            return domain(format!("Compton wavelength lambda_c must be positive, got {lambda_c}"));
        }
        let s = lambda_c * xi;
        if s >= 1.0 {
            return domain(format!("lambda_c * xi must be < 1 for a real rotation, got {s}"));
        }
        let c = ((1.0 - s) * (1.0 + s)).sqrt();
        Ok(Self { a, omega, xi, lambda_c, c, rot_angle: s.asin() })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn xi(&self) -> f64 {
        self.xi
    }
    pub fn lambda_c(&self) -> f64 {
        self.lambda_c
    }
    /// C = cos(λ̃η) = √(1 − (λ̃ξ)²).
    pub fn c(&self) -> f64 {
        self.c
    }
    /// λ̃η = arcsin(λ̃ξ).
    pub fn rot_angle(&self) -> f64 {
        self.rot_angle
    }

    pub fn a_sign(&self) -> ASign {
        if self.a > 0.0 {
            ASign::Positive
        } else {
            ASign::Negative
        }
    }

    /// ξ/(Cω), the slope of the exponent αₙ and of the polynomial parameter b in ε.
    pub fn kappa(&self) -> f64 {
        self.xi / (self.c * self.omega)
    }

    /// Same problem with A → −A.
    pub fn with_flipped_a(&self) -> Self {
        Self { a: -self.a, ..*self }
    }

    pub(crate) fn check_not_pole(&self, epsilon: f64) -> Result<()> {
        if (self.c + epsilon).abs() <= 4.0 * f64::EPSILON * self.c {
            return Err(Error::Pole { c: self.c });
        }
        Ok(())
    }

    /// V(x) = −A e^{−ωx}.
    pub fn potential(&self, x: f64) -> f64 {
        -self.a * (-self.omega * x).exp()
    }

    /// 2C|A|/(ωξ), the value of z at x = 0.
    pub fn z_scale(&self) -> f64 {
        2.0 * self.c * self.a.abs() / (self.omega * self.xi)
    }

    /// z = (2C|A|/ωξ) e^{−ωx}; maps ℝ onto (0, ∞), decreasing.
    pub fn z_of_x(&self, x: f64) -> f64 {
        self.z_scale() * (-self.omega * x).exp()
    }

    pub fn x_of_z(&self, z: f64) -> Result<f64> {
        if !(z > 0.0) {
            return domain(format!("z must be positive, got {z}"));
        }
        Ok((self.z_scale() / z).ln() / self.omega)
    }

    fn half_angle(&self) -> (f64, f64) {
        // cos(θ/2) = √((1+C)/2), sin(θ/2) = sin θ / (2 cos(θ/2))
        let cos_half = (0.5 * (1.0 + self.c)).sqrt();
        let sin_half = self.lambda_c * self.xi / (2.0 * cos_half);
        (cos_half, sin_half)
    }

    /// (g, f) → (φ⁺, φ⁻).
    pub fn rotate_spinor(&self, s: SpinorSample) -> Result<SpinorSample> {
        if s.frame != Frame::Original {
            return Err(Error::Usage("rotate_spinor expects a spinor in the original (g, f) frame".into()));
        }
        let (ch, sh) = self.half_angle();
        Ok(SpinorSample {
            upper: ch * s.upper + sh * s.lower,
            lower: -sh * s.upper + ch * s.lower,
            frame: Frame::Rotated,
        })
    }

    /// (φ⁺, φ⁻) → (g, f), the transpose of [`rotate_spinor`](Self::rotate_spinor).
    pub fn unrotate_spinor(&self, s: SpinorSample) -> Result<SpinorSample> {
        if s.frame != Frame::Rotated {
            return Err(Error::Usage("unrotate_spinor expects a spinor in the rotated frame".into()));
        }
        let (ch, sh) = self.half_angle();
        Ok(SpinorSample {
            upper: ch * s.upper - sh * s.lower,
            lower: sh * s.upper + ch * s.lower,
            frame: Frame::Original,
        })
    }

    /// φ⁻(x) = λ̃/(C+ε) · [−ξ + (C/ξ)V(x) + d/dx] φ⁺(x), derivative by a
    /// five-point central difference with h = max(1e−5, 1e−5|x|).
    pub fn kinetic_balance_apply<F: Fn(f64) -> f64>(&self, epsilon: f64, phi_plus: F, x: f64) -> Result<f64> {
        self.check_not_pole(epsilon)?;
        let h = (1e-5 * x.abs()).max(1e-5);
        let deriv = (-phi_plus(x + 2.0 * h) + 8.0 * phi_plus(x + h) - 8.0 * phi_plus(x - h) + phi_plus(x - 2.0 * h))
            / (12.0 * h);
        let shift = -self.xi + self.c / self.xi * self.potential(x);
        Ok(self.lambda_c / (self.c + epsilon) * (shift * phi_plus(x) + deriv))
    }

    /// Coefficients of [−d²/dx² + c₂e^{−2ωx} + c₁e^{−ωx} + c₀] φ⁺ = 0.
    pub fn schrodinger_coeffs(&self, epsilon: f64) -> SchrodingerCoeffs {
        let ca = self.c * self.a / self.xi;
        SchrodingerCoeffs {
            c2: ca * ca,
            c1: -ca * (self.omega + 2.0 * self.xi * epsilon / self.c),
            c0: -(epsilon * epsilon - 1.0) / (self.lambda_c * self.lambda_c),
            omega: self.omega,
        }
    }

    /// W(x) = (C/ξ) V(x) + (ξ/C) ε.
    pub fn superpotential(&self, epsilon: f64, x: f64) -> f64 {
        self.c / self.xi * self.potential(x) + self.xi / self.c * epsilon
    }

    /// W′(x) = (C/ξ) A ω e^{−ωx}.
    pub fn superpotential_derivative(&self, x: f64) -> f64 {
        self.c / self.xi * self.a * self.omega * (-self.omega * x).exp()
    }

    /// Parameters (E, B, D) of the nonrelativistic Morse problem with the same upper-component equation.
    pub fn nonrel_map(&self, epsilon: f64) -> NonRelMap {
        let e = (epsilon - 1.0) * (epsilon + 1.0) / (2.0 * self.lambda_c * self.lambda_c);
        let b = (self.c * self.a / self.xi).abs();
        let d = match self.a_sign() {
            ASign::Positive => self.xi * epsilon / self.c,
            ASign::Negative => -self.omega - self.xi * epsilon / self.c,
        };
        NonRelMap { e, b, d }
    }
}

/// Which pair of components a [`SpinorSample`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// (g, f), before the unitary rotation.
    Original,
    /// (φ⁺, φ⁻), after it.
    Rotated,
}

/// A point value of a two-component wavefunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorSample {
    pub upper: f64,
    pub lower: f64,
    pub frame: Frame,
}

impl SpinorSample {
    pub fn original(g: f64, f: f64) -> Self {
        Self { upper: g, lower: f, frame: Frame::Original }
    }

    pub fn rotated(phi_plus: f64, phi_minus: f64) -> Self {
        Self { upper: phi_plus, lower: phi_minus, frame: Frame::Rotated }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.upper * self.upper + self.lower * self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchrodingerCoeffs {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    pub omega: f64,
}

impl SchrodingerCoeffs {
    /// The effective potential U(x) = c₂e^{−2ωx} + c₁e^{−ωx} + c₀, so that φ″ = U φ.
    pub fn effective_potential(&self, x: f64) -> f64 {
        let e = (-self.omega * x).exp();
        (self.c2 * e + self.c1) * e + self.c0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonRelMap {
    pub e: f64,
    pub b: f64,
    pub d: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference() -> ModelParams {
        ModelParams::new(2.0, 0.5, 0.8, 1.0).unwrap()
    }

    #[test]
    fn constructor_validation() {
        assert!(ModelParams::new(0.0, 0.5, 0.8, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 0.8, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.5, -0.8, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.5, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.5, 0.8, 1.3).is_err());
        let p = reference();
        assert_relative_eq!(p.c(), 0.6, max_relative = 1e-15);
        assert_relative_eq!(p.rot_angle().sin(), 0.8, max_relative = 1e-15);
        assert_relative_eq!(p.rot_angle().cos(), p.c(), max_relative = 1e-15);
    }

    #[test]
    fn potential_values() {
        assert_eq!(ModelParams::new(2.0, 0.5, 0.8, 1.0).unwrap().potential(0.0), -2.0);
        let far = reference().potential(1e3);
        assert!(far < 0.0 && far > -1e-200);
        let p = ModelParams::new(-1.0, 1.0, 0.8, 1.0).unwrap();
        assert_relative_eq!(p.potential(-std::f64::consts::LN_2), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn coordinate_map() {
        let p = reference();
        assert_relative_eq!(p.z_of_x(0.0), 6.0, max_relative = 1e-15);
        assert!(p.z_of_x(2000.0) >= 0.0 && p.z_of_x(2000.0) < 1e-300);
        assert!((p.x_of_z(p.z_of_x(1.234)).unwrap() - 1.234).abs() <= 1e-13);
        assert!(p.x_of_z(0.0).is_err());
        assert!(p.z_of_x(1.0) < p.z_of_x(0.5));
    }

    #[test]
    fn rotation_values() {
        let p = reference();
        let r = p.rotate_spinor(SpinorSample::original(1.0, 0.0)).unwrap();
        assert_relative_eq!(r.upper, 2.0 / 5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.lower, -1.0 / 5f64.sqrt(), max_relative = 1e-15);
        assert_eq!(r.frame, Frame::Rotated);
        assert!(p.rotate_spinor(r).is_err());
        assert!(p.unrotate_spinor(SpinorSample::original(1.0, 0.0)).is_err());
    }

    #[test]
    fn rotation_becomes_identity_as_xi_vanishes() {
        let p = ModelParams::new(2.0, 0.5, 1e-15, 1.0).unwrap();
        let r = p.rotate_spinor(SpinorSample::original(0.3, -1.7)).unwrap();
        assert_relative_eq!(r.upper, 0.3, max_relative = 1e-12);
        assert_relative_eq!(r.lower, -1.7, max_relative = 1e-12);
    }

    #[test]
    fn schrodinger_coefficients() {
        let p = reference();
        let s = p.schrodinger_coeffs(0.6);
        assert_relative_eq!(s.c2, 2.25, max_relative = 1e-14);
        assert_relative_eq!(s.c1, -3.15, max_relative = 1e-14);
        assert_relative_eq!(s.c0, 0.64, max_relative = 1e-14);
        assert_eq!(p.schrodinger_coeffs(1.0).c0, 0.0);
        assert_eq!(p.schrodinger_coeffs(-1.0).c0, 0.0);
        let flipped = p.with_flipped_a().schrodinger_coeffs(0.6);
        assert_eq!(flipped.c2, s.c2);
        assert_eq!(flipped.c1, -s.c1);
        assert_eq!(flipped.c0, s.c0);
    }

    #[test]
    fn superpotential_reconstructs_upper_equation() {
        let p = reference();
        let lam = p.lambda_c();
        for &eps in &[0.6, 0.81, -0.3, 1.4] {
            assert_relative_eq!(p.superpotential(eps, 800.0), p.xi() / p.c() * eps, max_relative = 1e-15);
            let s = p.schrodinger_coeffs(eps);
            for i in 0..50 {
                let x = -3.0 + 0.2 * i as f64;
                let w = p.superpotential(eps, x);
                let from_w = w * w - p.superpotential_derivative(x) - ((eps / p.c()).powi(2) - 1.0) / (lam * lam);
                let direct = s.effective_potential(x);
                assert!((from_w - direct).abs() <= 1e-10 * direct.abs().max(1.0), "x={x}");
            }
        }
    }

    #[test]
    fn kinetic_balance_edge_cases() {
        let p = ModelParams::new(-1.5, 0.5, 0.8, 1.0).unwrap();
        assert_eq!(p.kinetic_balance_apply(0.3, |_| 0.0, 0.7).unwrap(), 0.0);
        // −ξ + (C/ξ)V(x) = 0 where V(x) = ξ²/C
        let x = -((p.xi() * p.xi() / p.c()) / 1.5).ln() / p.omega();
        assert!(p.kinetic_balance_apply(0.3, |_| 1.0, x).unwrap().abs() < 1e-14);
        assert_eq!(p.kinetic_balance_apply(-p.c(), |t| t, 0.0), Err(Error::Pole { c: p.c() }));
    }

    #[test]
    fn nonrelativistic_map_values() {
        let p = reference();
        assert_eq!(p.nonrel_map(1.0).e, 0.0);
        let m = p.nonrel_map(0.6);
        assert_relative_eq!(m.d, 0.8, max_relative = 1e-15);
        assert_relative_eq!(m.b, 1.5, max_relative = 1e-15);
        assert_relative_eq!(m.e, -0.32, max_relative = 1e-14);
        let q = p.with_flipped_a();
        let eps = 0.37;
        let mm = q.nonrel_map(eps);
        assert_relative_eq!(mm.b, 1.5, max_relative = 1e-15);
        assert_relative_eq!(mm.d, -0.5 - 0.8 * eps / 0.6, max_relative = 1e-15);
    }

    #[test]
    fn nonrelativistic_energy_limit_is_second_order() {
        let e_nr = -0.07;
        let err = |lam: f64| {
            let p = ModelParams::new(2.0, 0.5, 0.8, lam).unwrap();
            (p.nonrel_map(1.0 + lam * lam * e_nr).e - e_nr).abs()
        };
        let (e1, e2, e3) = (err(1e-2), err(1e-3), err(1e-4));
        let slope1 = (e1 / e2).log10();
        assert!((slope1 - 2.0).abs() < 0.05, "{slope1}");
        // at λ̃ = 1e−4 the O(λ̃²) term sits below the rounding of ε = 1 + λ̃²E itself
        assert!(e3 <= 4.0 * f64::EPSILON / 1e-8, "{e3}");
    }

    proptest! {
        #[test]
        fn rotation_round_trip_and_norm(g in -10.0..10.0f64, f in -10.0..10.0f64, xi in 0.01..0.99f64) {
            let p = ModelParams::new(1.0, 0.5, xi, 1.0).unwrap();
            let s = SpinorSample::original(g, f);
            let r = p.rotate_spinor(s).unwrap();
            let back = p.unrotate_spinor(r).unwrap();
            prop_assert!((back.upper - g).abs() <= 1e-14 * (1.0 + g.abs()));
            prop_assert!((back.lower - f).abs() <= 1e-14 * (1.0 + f.abs()));
            prop_assert!((r.norm_sqr() - s.norm_sqr()).abs() <= 1e-14 * (1.0 + s.norm_sqr()));
        }

        #[test]
        fn c_and_sine_complete_the_square(lam in 0.01..3.0f64, frac in 0.0..0.999f64) {
            let xi = (frac / lam).max(1e-9);
            let p = ModelParams::new(1.0, 1.0, xi, lam).unwrap();
            let s = lam * xi;
            prop_assert!((p.c() * p.c() + s * s - 1.0).abs() <= 1e-15);
            prop_assert!(p.c() > 0.0 && p.c() <= 1.0);
            prop_assert!(p.rot_angle() > 0.0 && p.rot_angle() < std::f64::consts::FRAC_PI_2);
        }

        #[test]
        fn upper_equation_is_image_of_general_form(a in -5.0..5.0f64, omega in 0.05..3.0f64, xi in 0.05..0.9f64, eps in -3.0..3.0f64, x in -2.0..4.0f64) {
            prop_assume!(a.abs() > 1e-3);
            let p = ModelParams::new(a, omega, xi, 1.0).unwrap();
            // (C/ξ)²V² − (C/ξ)V′ + 2εV − (ε²−1)/λ̃² with V = −A e^{−ωx}
            let v = p.potential(x);
            let dv = a * omega * (-omega * x).exp();
            let general = (p.c() / xi).powi(2) * v * v - p.c() / xi * dv + 2.0 * eps * v - (eps * eps - 1.0);
            let s = p.schrodinger_coeffs(eps).effective_potential(x);
            prop_assert!((general - s).abs() <= 1e-12 * (1.0 + general.abs()));
        }
    }
}
