//! The `spectrum`, `wavefunction` and `coefficients` subcommands.

use dirac_morse::bound::{bound_spinor, spectrum, upper_residual, BoundState, Branch};
use dirac_morse::model::ModelParams;
use dirac_morse::oracle::{ode_residual_at, shoot_spectrum, shooting_grid, Grid};
use dirac_morse::scatter::{cdh_args_of_energy, expansion_coefficients, ScatterSolution};
use dirac_morse::specfun::cdh_recursion;
use dirac_morse::Error;

use crate::config::RunConfig;
use crate::output::{Cell, Table};
use crate::CliError;

/// Largest |analytic − shot| accepted as the same level.
pub const MATCH_TOL: f64 = 1e-6;

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

/// Shooting window that brackets the valid states of either sign of A.
pub fn default_window(params: &ModelParams) -> (f64, f64) {
    if params.a() > 0.0 {
        (0.01, 0.999)
    } else {
        (-0.999, -0.01)
    }
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.model.params();
    let window = config.window.unwrap_or_else(|| default_window(&params));
    let grid = shooting_grid(&params, window)?;
    let shot = shoot_spectrum(&params, window, &grid)?;
    let mut table = Table::new(vec!["n", "branch", "epsilon", "alpha_n", "valid", "shooting_epsilon", "abs_delta"]);
    let mut missing = Vec::new();
    for st in spectrum(&params) {
        let in_window = st.valid && st.epsilon > window.0 && st.epsilon < window.1;
        let nearest =
            shot.energies.iter().copied().min_by(|a, b| (a - st.epsilon).abs().total_cmp(&(b - st.epsilon).abs()));
        let matched = nearest.filter(|e| in_window && (e - st.epsilon).abs() <= MATCH_TOL);
        if in_window && matched.is_none() {
            missing.push(format!("n = {} {} at {}", st.n, branch_name(st.branch), st.epsilon));
        }
        table.push(vec![
            Cell::Int(st.n as i64),
            Cell::Text(branch_name(st.branch).into()),
            Cell::Num(st.epsilon),
            Cell::Num(st.alpha_n),
            Cell::Bool(st.valid),
            matched.map_or(Cell::Empty, Cell::Num),
            matched.map_or(Cell::Empty, |e| Cell::Num((e - st.epsilon).abs())),
        ]);
    }
    if !missing.is_empty() {
        return Err(CliError::Numeric(format!("shooting oracle did not reproduce {}", missing.join(", "))));
    }
    Ok(table)
}

fn sampling_grid(config: &RunConfig, params: &ModelParams) -> Result<Grid, CliError> {
    let grid = match config.grid {
        Some(g) => Grid::new(g.x_min, g.x_max, g.n_points),
        None => Grid::new(params.x_of_z(30.0)?, params.x_of_z(0.05)?, 201),
    };
    grid.map_err(|e| CliError::Config(format!("empty grid: {e}")))
}

fn find_state(params: &ModelParams, n: usize, branch: Branch) -> Result<BoundState, CliError> {
    let st = spectrum(params).into_iter().find(|s| s.n == n && s.branch == branch).ok_or_else(|| {
        CliError::Config(format!("no level n = {n}; the spectrum has {} levels", spectrum(params).len() / 2))
    })?;
    if !st.valid {
        return Err(CliError::Config(format!(
            "state n = {n} {} has alpha_n = {} <= 0 and is not normalizable",
            branch_name(branch),
            st.alpha_n
        )));
    }
    Ok(st)
}

pub fn cmd_wavefunction(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.model.params();
    let grid = sampling_grid(config, &params)?;
    let xs: Vec<f64> = grid.points().collect();
    let mut table = Table::new(vec!["x", "z", "phi_upper", "theta_lower", "ode_residual"]);
    match (config.state, config.energy) {
        (Some(_), Some(_)) => Err(CliError::Config("give either a bound-state index or an energy, not both".into())),
        (None, None) => Err(CliError::Config("wavefunction needs --state N or --energy E".into())),
        (Some(n), None) => {
            let st = find_state(&params, n, config.branch.into())?;
            let samples = xs
                .iter()
                .map(|&x| {
                    let z = params.z_of_x(x);
                    Ok((z, bound_spinor(&params, &st, z)?, upper_residual(&params, &st, z)?.0))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let peak = samples.iter().map(|(_, s, _)| s.upper.abs()).fold(0.0, f64::max);
            for (&x, (z, s, r)) in xs.iter().zip(&samples) {
                table.push(vec![
                    Cell::Num(x),
                    Cell::Num(*z),
                    Cell::Num(s.upper),
                    Cell::Num(s.lower),
                    Cell::Num(r / peak),
                ]);
            }
            Ok(table)
        }
        (None, Some(eps)) => {
            if eps.abs() <= 1.0 {
                return Err(CliError::Config(format!("energy {eps} lies in the bound-state regime; use spectrum")));
            }
            let sol = ScatterSolution::new(&params, eps, config.alpha, config.n_terms)?;
            let samples = xs.iter().map(|&x| sol.spinor(x)).collect::<Result<Vec<_>, Error>>()?;
            let peak = samples.iter().map(|s| s.upper.abs()).fold(0.0, f64::max);
            let upper = |x: f64| sol.spinor(x).map_or(f64::NAN, |s| s.upper);
            for (&x, s) in xs.iter().zip(&samples) {
                let r = ode_residual_at(&params, eps, &upper, x);
                table.push(vec![
                    Cell::Num(x),
                    Cell::Num(params.z_of_x(x)),
                    Cell::Num(s.upper),
                    Cell::Num(s.lower),
                    Cell::Num(r / peak),
                ]);
            }
            Ok(table)
        }
    }
}

pub fn cmd_coefficients(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.model.params();
    let eps = config.energy.ok_or_else(|| CliError::Config("coefficients needs --energy E with |E| > 1".into()))?;
    if eps.abs() <= 1.0 {
        return Err(CliError::Config(format!("energy {eps} lies in the bound-state regime; use spectrum")));
    }
    let args = cdh_args_of_energy(&params, eps, config.alpha)?;
    let s = cdh_recursion(&args, config.n_terms - 1)?;
    let f = expansion_coefficients(&params, eps, config.alpha, config.n_terms)?;
    let mut table = Table::new(vec!["n", "s_n", "f_n"]);
    for (n, (s, f)) in s.iter().zip(&f).enumerate() {
        table.push(vec![Cell::Int(n as i64), Cell::Num(*s), Cell::Num(*f)]);
    }
    Ok(table)
}
