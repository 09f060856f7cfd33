//! Independent numerical checks on the analytic results: direct integration of
//! the upper-component equation −φ″ + U(x)φ = 0, a shooting eigenvalue search,
//! and a finite-difference residual for arbitrary trial functions.

use crate::bound::n_max;
use crate::error::{domain, Error, Result};
use crate::model::{ModelParams, SchrodingerCoeffs};

/// Uniform grid on [x_min, x_max].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub spacing: f64,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return domain(format!("grid needs finite x_min < x_max, got [{x_min}, {x_max}]"));
        }
        if n_points < 3 {
            return domain(format!("grid needs at least 3 points, got {n_points}"));
        }
        Ok(Self { x_min, x_max, n_points, spacing: (x_max - x_min) / (n_points - 1) as f64 })
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.point(i))
    }
}

/// φ on a grid. True values are `values[i] · exp(log_scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
    pub log_scale: f64,
}

impl OdeSolution {
    pub fn value(&self, i: usize) -> f64 {
        self.values[i] * self.log_scale.exp()
    }
}

const RESCALE_AT: f64 = 1e150;

/// Classical RK4 for (φ, φ′) with one step per grid interval.
pub fn integrate_ode(
    params: &ModelParams,
    epsilon: f64,
    grid: &Grid,
    init_value: f64,
    init_slope: f64,
) -> Result<OdeSolution> {
    let coeffs = params.schrodinger_coeffs(epsilon);
    Ok(integrate_coeffs(&coeffs, grid, init_value, init_slope))
}

fn integrate_coeffs(coeffs: &SchrodingerCoeffs, grid: &Grid, init_value: f64, init_slope: f64) -> OdeSolution {
    let u = |x: f64| coeffs.effective_potential(x);
    let mut values = Vec::with_capacity(grid.n_points);
    let mut slopes = Vec::with_capacity(grid.n_points);
    let mut log_scale = 0.0;
    let (mut y, mut dy) = (init_value, init_slope);
    values.push(y);
    slopes.push(dy);
    for i in 1..grid.n_points {
        let x = grid.point(i - 1);
        let h = grid.point(i) - x;
        let (um, ue) = (u(x + 0.5 * h), u(x + h));
        let k1 = (dy, u(x) * y);
        let k2 = (dy + 0.5 * h * k1.1, um * (y + 0.5 * h * k1.0));
        let k3 = (dy + 0.5 * h * k2.1, um * (y + 0.5 * h * k2.0));
        let k4 = (dy + h * k3.1, ue * (y + h * k3.0));
        y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dy += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        let size = y.abs().max(dy.abs());
        if size > RESCALE_AT {
            y /= size;
            dy /= size;
            values.iter_mut().for_each(|v| *v /= size);
            slopes.iter_mut().for_each(|v| *v /= size);
            log_scale += size.ln();
        }
        values.push(y);
        slopes.push(dy);
    }
    OdeSolution { grid: *grid, values, slopes, log_scale }
}

/// Bound states found by shooting.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShootingResult {
    pub energies: Vec<f64>,
    pub node_counts: Vec<usize>,
    /// Normalized matching mismatch at the converged energy.
    pub residuals: Vec<f64>,
}

/// Grid spanning z = max(50, 8(n_max+κ+1)) on the repulsive side to 24 decay
/// lengths past the outer turning point for every energy in the window, with
/// at most 0.4 radians of local phase per step.
pub fn shooting_grid(params: &ModelParams, window: (f64, f64)) -> Result<Grid> {
    check_window(window)?;
    let z_left = 50f64.max(8.0 * (n_max(params) as f64 + params.kappa() + 1.0));
    let x_min = params.x_of_z(z_left)?;
    let mut x_turn = x_min;
    for eps in [window.0, window.1] {
        if let Some(x) = outer_turning_point(&params.schrodinger_coeffs(eps)) {
            x_turn = x_turn.max(x);
        }
    }
    let c0_min = [window.0, window.1].iter().map(|&e| params.schrodinger_coeffs(e).c0).fold(f64::INFINITY, f64::min);
    let x_max = x_turn.max(x_min + 1.0) + 24.0 / c0_min.sqrt();
    let h = 0.1f64.min(0.4 / (0.5 * params.omega() * z_left));
    let n_points = ((x_max - x_min) / h).ceil() as usize + 1;
    Grid::new(x_min, x_max, n_points)
}

fn check_window(window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    if !(lo < hi) || !(lo > -1.0) || !(hi < 1.0) {
        return domain(format!("energy window must satisfy -1 < lo < hi < 1, got ({lo}, {hi})"));
    }
    Ok(())
}

/// Largest x with U(x) = 0, from the smaller positive root in e = e^{−ωx}.
fn outer_turning_point(c: &SchrodingerCoeffs) -> Option<f64> {
    let disc = c.c1 * c.c1 - 4.0 * c.c2 * c.c0;
    if disc < 0.0 {
        return None;
    }
    let roots = [(-c.c1 - disc.sqrt()) / (2.0 * c.c2), (-c.c1 + disc.sqrt()) / (2.0 * c.c2)];
    roots
        .iter()
        .filter(|&&e| e > 0.0)
        .fold(None, |m: Option<f64>, &e| Some(m.map_or(e, |v| v.min(e))))
        .map(|e| -e.ln() / c.omega)
}

/// Minimum of U for the window midpoint, clamped to the interior of the grid.
fn match_index(params: &ModelParams, window: (f64, f64), grid: &Grid) -> usize {
    let c = params.schrodinger_coeffs(0.5 * (window.0 + window.1));
    let x = if c.c1 < 0.0 { (-c.c1 / (2.0 * c.c2)).ln() / -c.omega } else { 0.5 * (grid.x_min + grid.x_max) };
    let i = ((x - grid.x_min) / grid.spacing).round();
    (i.max(2.0) as usize).min(grid.n_points - 4)
}

/// Numerov sweep over `indices` from (0, 1e-30). Returns the last two values
/// and the number of sign changes along the way, rescaling to stay finite.
/// `a[i] = 12 − 10wᵢ`, `w[i] = 1 − h²Uᵢ/12`, `inv_w[i] = 1/wᵢ`.
fn numerov<I: Iterator<Item = usize>>(a: &[f64], w: &[f64], inv_w: &[f64], mut indices: I) -> (f64, f64, usize) {
    let mut i_prev = indices.next().unwrap_or(0);
    let mut i_cur = match indices.next() {
        Some(i) => i,
        None => return (0.0, 0.0, 0),
    };
    let (mut prev, mut cur) = (0.0, 1e-30);
    let mut nodes = 0;
    for i_next in indices {
        let next = (a[i_cur] * cur - w[i_prev] * prev) * inv_w[i_next];
        if next * cur < 0.0 {
            nodes += 1;
        }
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
        }
        i_prev = i_cur;
        i_cur = i_next;
    }
    (prev, cur, nodes)
}

struct Shot {
    mismatch: f64,
    nodes: usize,
}

/// `decay` holds e^{−ωx} on the grid.
fn shoot(params: &ModelParams, epsilon: f64, grid: &Grid, decay: &[f64], m: usize) -> Shot {
    let c = params.schrodinger_coeffs(epsilon);
    let k = grid.spacing * grid.spacing / 12.0;
    let w: Vec<f64> = decay.iter().map(|e| 1.0 - k * ((c.c2 * e + c.c1) * e + c.c0)).collect();
    let a: Vec<f64> = w.iter().map(|w| 12.0 - 10.0 * w).collect();
    let inv_w: Vec<f64> = w.iter().map(|w| 1.0 / w).collect();
    // left ends holding (φₘ, φₘ₊₁), right ends holding (φₘ₊₁, φₘ)
    let (l0, l1, left_nodes) = numerov(&a, &w, &inv_w, 0..=m + 1);
    let (r1, r0, right_nodes) = numerov(&a, &w, &inv_w, (m..grid.n_points).rev());
    let norm = ((l0 * l0 + l1 * l1) * (r0 * r0 + r1 * r1)).sqrt();
    let mismatch = if norm > 0.0 { (l0 * r1 - l1 * r0) / norm } else { 0.0 };
    // a sign change on the shared interval [m, m+1] is seen by both sweeps
    let shared = usize::from(r0 * r1 < 0.0);
    Shot { mismatch, nodes: left_nodes + right_nodes - shared.min(right_nodes) }
}

/// Scan resolution of the energy window.
pub const SCAN_POINTS: usize = 500;
/// Bisection stops below this energy bracket.
pub const ENERGY_TOL: f64 = 1e-10;
const MAX_SPLITS: usize = 3;

/// All bound-state energies in the window, by matching Numerov solutions
/// integrated inward from both ends. Scan cells whose node counts differ by
/// two or more without a sign change are subdivided.
pub fn shoot_spectrum(params: &ModelParams, window: (f64, f64), grid: &Grid) -> Result<ShootingResult> {
    check_window(window)?;
    let m = match_index(params, window, grid);
    let decay: Vec<f64> = grid.points().map(|x| (-params.omega() * x).exp()).collect();
    let f = |e: f64| shoot(params, e, grid, &decay, m);
    let step = (window.1 - window.0) / SCAN_POINTS as f64;
    let mut result = ShootingResult::default();
    let mut lo = (window.0, f(window.0));
    for k in 1..=SCAN_POINTS {
        let e = if k == SCAN_POINTS { window.1 } else { window.0 + k as f64 * step };
        let hi = (e, f(e));
        scan_cell(&f, lo.0, &lo.1, hi.0, &hi.1, 0, &mut result)?;
        lo = hi;
    }
    Ok(result)
}

fn scan_cell<F: Fn(f64) -> Shot>(
    f: &F,
    lo: f64,
    s_lo: &Shot,
    hi: f64,
    s_hi: &Shot,
    depth: usize,
    out: &mut ShootingResult,
) -> Result<()> {
    if s_lo.mismatch * s_hi.mismatch < 0.0 {
        let root = bisect(f, lo, hi, s_lo.mismatch)?;
        let shot = f(root);
        out.energies.push(root);
        out.node_counts.push(shot.nodes);
        out.residuals.push(shot.mismatch.abs());
    } else if depth < MAX_SPLITS && s_lo.nodes.abs_diff(s_hi.nodes) >= 2 {
        let parts = 8;
        let width = (hi - lo) / parts as f64;
        let mut a = (lo, f(lo));
        for k in 1..=parts {
            let e = if k == parts { hi } else { lo + k as f64 * width };
            let b = (e, f(e));
            scan_cell(f, a.0, &a.1, b.0, &b.1, depth + 1, out)?;
            a = b;
        }
    }
    Ok(())
}

fn bisect<F: Fn(f64) -> Shot>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    let mut iterations = 0;
    while b - a > ENERGY_TOL {
        let mid = 0.5 * (a + b);
        let fm = f(mid).mismatch;
        if fm * fa <= 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        iterations += 1;
        if iterations > 200 {
            return Err(Error::Numeric(format!("bisection stalled near epsilon = {a}")));
        }
    }
    Ok(0.5 * (a + b))
}

/// Finite-difference step for φ″.
pub const FD_STEP: f64 = 1e-3;

/// −φ″(x) + U(x)φ(x) with a 5-point central second difference.
pub fn ode_residual_at<F: Fn(f64) -> f64>(params: &ModelParams, epsilon: f64, wavefun: &F, x: f64) -> f64 {
    let h = FD_STEP;
    let f0 = wavefun(x);
    let d2 = (-wavefun(x + 2.0 * h) + 16.0 * wavefun(x + h) - 30.0 * f0 + 16.0 * wavefun(x - h) - wavefun(x - 2.0 * h))
        / (12.0 * h * h);
    -d2 + params.schrodinger_coeffs(epsilon).effective_potential(x) * f0
}

/// max |−φ″ + Uφ| / max |φ| over the interior grid points.
pub fn ode_residual<F: Fn(f64) -> f64>(params: &ModelParams, epsilon: f64, wavefun: F, grid: &Grid) -> f64 {
    let inner = 1..grid.n_points - 1;
    let peak = grid.points().map(|x| wavefun(x).abs()).fold(0.0, f64::max);
    let worst = inner.map(|i| ode_residual_at(params, epsilon, &wavefun, grid.point(i)).abs()).fold(0.0, f64::max);
    worst / peak
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{bound_spinor, spectrum};

    fn reference() -> ModelParams {
        ModelParams::new(2.0, 0.5, 0.8, 1.0).unwrap()
    }

    fn free(k: f64) -> SchrodingerCoeffs {
        SchrodingerCoeffs { c2: 0.0, c1: 0.0, c0: -k * k, omega: 1.0 }
    }

    fn free_error(n_points: usize) -> f64 {
        let k = 1.3;
        let grid = Grid::new(0.0, 10.0, n_points).unwrap();
        let sol = integrate_coeffs(&free(k), &grid, 1.0, 0.5 * k);
        grid.points()
            .enumerate()
            .map(|(i, x)| (sol.value(i) - ((k * x).cos() + 0.5 * (k * x).sin())).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn grid_layout() {
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing, 0.5);
        assert_eq!(g.points().collect::<Vec<_>>(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(Grid::new(1.0, 1.0, 5).is_err());
        assert!(Grid::new(0.0, 1.0, 2).is_err());
    }

    #[test]
    fn free_particle_accuracy() {
        assert!(free_error(2000) <= 1e-9, "{}", free_error(2000));
    }

    #[test]
    fn integrator_order() {
        let order = (free_error(201) / free_error(401)).log2();
        assert!(order >= 3.8, "{order}");
    }

    #[test]
    fn rescaling_keeps_values_finite() {
        let grid = Grid::new(0.0, 400.0, 40_001).unwrap();
        let grow = SchrodingerCoeffs { c0: 4.0, ..free(0.0) };
        let sol = integrate_coeffs(&grow, &grid, 1.0, 2.0);
        assert!(sol.log_scale > 0.0);
        assert!(sol.values.iter().all(|v| v.is_finite()));
        let log_end = sol.values.last().unwrap().ln() + sol.log_scale;
        assert!((log_end - 800.0).abs() < 1e-4, "{log_end}");
    }

    #[test]
    fn reproduces_ground_state() {
        let p = reference();
        let state = spectrum(&p)[0];
        let phi = |x: f64| bound_spinor(&p, &state, p.z_of_x(x)).unwrap().upper;
        let x0 = p.x_of_z(30.0).unwrap();
        let x1 = p.x_of_z(0.5).unwrap();
        let grid = Grid::new(x0, x1, 4001).unwrap();
        let z0 = p.z_of_x(x0);
        let slope = -p.omega() * phi(x0) * (state.alpha_n - 0.5 * z0);
        let sol = integrate_ode(&p, state.epsilon, &grid, phi(x0), slope).unwrap();
        let peak = grid.points().map(|x| phi(x).abs()).fold(0.0, f64::max);
        let err = grid.points().enumerate().map(|(i, x)| (sol.value(i) - phi(x)).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-7 * peak, "{}", err / peak);
    }

    #[test]
    fn reference_spectrum_by_shooting() {
        let p = reference();
        let window = (0.01, 0.99);
        let grid = shooting_grid(&p, window).unwrap();
        let r = shoot_spectrum(&p, window, &grid).unwrap();
        let expect = [0.6, 0.812_363_520_850_167_3, 0.96];
        assert_eq!(r.energies.len(), 3, "{:?}", r.energies);
        for (e, x) in r.energies.iter().zip(expect) {
            assert!((e - x).abs() <= 1e-6, "{e} vs {x}");
        }
        assert_eq!(r.node_counts, vec![0, 1, 2]);
        assert!(r.residuals.iter().all(|v| *v < 1e-6));
    }

    #[test]
    fn negative_window_of_positive_well_is_empty() {
        let p = reference();
        let window = (-0.99, -0.01);
        let grid = shooting_grid(&p, window).unwrap();
        assert!(shoot_spectrum(&p, window, &grid).unwrap().energies.is_empty());
        let narrow = (0.65, 0.8);
        let grid = shooting_grid(&p, narrow).unwrap();
        assert!(shoot_spectrum(&p, narrow, &grid).unwrap().energies.is_empty());
        assert!(shooting_grid(&p, (0.5, 1.0)).is_err());
    }

    #[test]
    fn residual_of_exact_state() {
        let p = reference();
        for state in spectrum(&p).into_iter().filter(|s| s.valid) {
            let phi = |x: f64| bound_spinor(&p, &state, p.z_of_x(x)).unwrap().upper;
            let grid = Grid::new(p.x_of_z(40.0).unwrap(), p.x_of_z(1e-3).unwrap(), 400).unwrap();
            let r = ode_residual(&p, state.epsilon, phi, &grid);
            assert!(r <= 1e-7, "n={} {r}", state.n);
        }
    }

    #[test]
    fn residual_of_gaussian_is_large() {
        let p = reference();
        let grid = Grid::new(-3.0, 6.0, 200).unwrap();
        let r = ode_residual(&p, 0.6, |x: f64| (-(x - 1.0).powi(2)).exp(), &grid);
        assert!(r > 1e-3, "{r}");
    }
}
