//! Backward theta-scheme on the trinomial lattice.
//!
//! Starting from terminal data at level `n`, each transition computes
//! `Z_i = E_i[Y_{i+1} H_i]` first and then
//!
//! * `θ = 0` (pseudo-explicit): `Y_i[j] = E_j[Y_{i+1} + h f(Y_{i+1}, Z_i[j])]`
//!   where `Z_i[j]` is held fixed per departure node;
//! * `θ = 1` (implicit): `Y_i[j]` solves `y = E_j[Y_{i+1}] + h f(y, Z_i[j])`.
//!
//! Divergence is the object of study, so growing values never abort a solve:
//! the first level containing a non-finite value stops the recursion and
//! sets the `diverged` flag on the result instead.

use std::fmt;

use thiserror::Error;

use crate::driver::Driver;
use crate::lattice::{Lattice, LevelValues, P_DOWN, P_MID, P_UP};

/// Scheme variant: `θ = 0` evaluates the generator at `Y_{i+1}`, `θ = 1`
/// solves for `Y_i` implicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theta {
    PseudoExplicit,
    Implicit,
}

impl Theta {
    pub fn from_int(v: u64) -> Option<Self> {
        match v {
            0 => Some(Theta::PseudoExplicit),
            1 => Some(Theta::Implicit),
            _ => None,
        }
    }

    pub fn as_int(self) -> u64 {
        match self {
            Theta::PseudoExplicit => 0,
            Theta::Implicit => 1,
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_int())
    }
}

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("implicit step failed to converge: {0}")]
    ImplicitSolveFailure(String),
    #[error("scheme is ill-posed: {0}")]
    IllPosed(String),
}

/// Knobs for one backward solve.
#[derive(Debug, Clone)]
pub struct SchemeConfig {
    pub theta: Theta,
    /// Relative stopping tolerance for the implicit per-node solve.
    pub fixed_point_tolerance: f64,
    pub fixed_point_max_iterations: usize,
    /// Reporting cap for `|Y_0| ∧ cap`; does not affect the solve itself.
    pub cap: f64,
    /// Keep the full `Y` trajectory in the result.
    pub keep_levels: bool,
}

impl SchemeConfig {
    pub fn new(theta: Theta) -> Self {
        Self {
            theta,
            fixed_point_tolerance: 1e-12,
            fixed_point_max_iterations: 100,
            cap: 10.0,
            keep_levels: false,
        }
    }

    pub fn implicit() -> Self {
        Self::new(Theta::Implicit)
    }

    pub fn pseudo_explicit() -> Self {
        Self::new(Theta::PseudoExplicit)
    }
}

#[derive(Debug, Clone)]
pub struct SchemeResult {
    /// `Y_0` at the root node; NaN when the solve diverged.
    pub y0: f64,
    /// `Z_0` at the root node; NaN when the solve diverged before level 0.
    pub z0: f64,
    /// A non-finite value appeared; the recursion stopped at that level.
    pub diverged: bool,
    /// Largest finite `|Y_i[j]|` seen over all computed levels.
    pub max_abs_y: f64,
    /// Full trajectory (`y_levels[i]` = level `i`), when requested.
    pub y_levels: Option<Vec<LevelValues>>,
}

impl SchemeResult {
    /// `|Y_0| ∧ cap`, with diverged or non-finite solves reported as `cap`.
    pub fn capped_y0(&self, cap: f64) -> f64 {
        if self.diverged || !self.y0.is_finite() {
            cap
        } else {
            self.y0.abs().min(cap)
        }
    }
}

/// Runs the backward recursion from `terminal(W_T)` down to time zero.
///
/// Well-posedness follows the usual conditions: the pseudo-explicit scheme
/// needs a declared Lipschitz-in-`y` constant, the implicit scheme needs
/// monotonicity (guaranteed by [`Driver`] construction) and `L^Z`.
pub fn solve_backward(
    lattice: &Lattice,
    driver: &Driver,
    config: &SchemeConfig,
    terminal: impl Fn(f64) -> f64,
) -> Result<SchemeResult, SchemeError> {
    if config.theta == Theta::PseudoExplicit && driver.lipschitz_y().is_none() {
        return Err(SchemeError::IllPosed(format!(
            "pseudo-explicit scheme requires a Lipschitz-in-y constant, driver `{}` declares none",
            driver.label()
        )));
    }

    let h = lattice.step_size();
    let n = lattice.steps();
    let mut current = lattice.terminal_level(&terminal);
    let mut max_abs_y = current.max_abs();
    let mut stored: Vec<LevelValues> = Vec::new();
    if config.keep_levels {
        stored.push(current.clone());
    }

    let mut diverged = !current.all_finite();
    let mut z0 = f64::NAN;

    if !diverged {
        'levels: for i in (0..n).rev() {
            let z = lattice.z_expectation(&current);
            let ce = lattice.conditional_expectation(&current);
            let mut values = Vec::with_capacity(2 * i + 1);
            for j in -(i as i64)..=(i as i64) {
                let rhs = ce.get(j);
                let zj = z.get(j);
                if !rhs.is_finite() || !zj.is_finite() {
                    diverged = true;
                    break 'levels;
                }
                let y = match config.theta {
                    Theta::PseudoExplicit => {
                        if driver.is_y_free() {
                            rhs + h * driver.evaluate(current.get(j), zj)
                        } else {
                            let f_avg = P_UP * driver.evaluate(current.get(j + 1), zj)
                                + P_MID * driver.evaluate(current.get(j), zj)
                                + P_DOWN * driver.evaluate(current.get(j - 1), zj);
                            rhs + h * f_avg
                        }
                    }
                    Theta::Implicit => implicit_step(rhs, zj, driver, h, config)?,
                };
                values.push(y);
            }
            let level = LevelValues::from_fn(i, |j| values[(j + i as i64) as usize]);
            max_abs_y = max_abs_y.max(level.max_abs());
            if i == 0 {
                z0 = z.get(0);
            }
            let finite = level.all_finite();
            current = level;
            if config.keep_levels {
                stored.push(current.clone());
            }
            if !finite {
                diverged = true;
                break;
            }
        }
    }

    let y0 = if diverged { f64::NAN } else { current.get(0) };

    if config.keep_levels {
        stored.reverse();
    }
    Ok(SchemeResult {
        y0,
        z0,
        diverged,
        max_abs_y,
        y_levels: config.keep_levels.then_some(stored),
    })
}

/// Solves `y = rhs + h·f(y, z)` for the implicit transition.
///
/// Ladder: closed form for the linear family, Picard iteration seeded at
/// `rhs` while `h·L^Y < 1` (falling back to bracketing on a stall), and
/// otherwise safeguarded bisection on `G(y) = y - h f(y,z) - rhs`, which is
/// strictly increasing for monotone drivers.
pub fn implicit_step(
    rhs: f64,
    z: f64,
    driver: &Driver,
    h: f64,
    config: &SchemeConfig,
) -> Result<f64, SchemeError> {
    if let Some((a, _)) = driver.linear_coefficients() {
        return Ok((rhs + h * driver.evaluate(0.0, z)) / (1.0 - a * h));
    }

    if let Some(ly) = driver.lipschitz_y() {
        if h * ly < 1.0 {
            let tol = config.fixed_point_tolerance;
            let mut y = rhs;
            for _ in 0..config.fixed_point_max_iterations {
                let next = rhs + h * driver.evaluate(y, z);
                if !next.is_finite() {
                    // Overflow inside the generator: surface it to the
                    // divergence bookkeeping rather than erroring out.
                    return Ok(next);
                }
                if (next - y).abs() <= tol * next.abs().max(1.0) {
                    return Ok(next);
                }
                y = next;
            }
            // Contraction too slow for the iteration budget.
        }
    }

    bracketed_solve(rhs, z, driver, h, config)
}

fn bracketed_solve(
    rhs: f64,
    z: f64,
    driver: &Driver,
    h: f64,
    config: &SchemeConfig,
) -> Result<f64, SchemeError> {
    let g = |y: f64| y - h * driver.evaluate(y, z) - rhs;

    let mut width = rhs.abs().max(1.0);
    let mut lo = rhs - width;
    let mut hi = rhs + width;
    let mut g_lo = g(lo);
    let mut g_hi = g(hi);
    let mut doublings = 0;
    while g_lo > 0.0 || g_hi < 0.0 {
        doublings += 1;
        if doublings > 60 {
            return Err(SchemeError::ImplicitSolveFailure(format!(
                "no sign change of y - h f(y, z) - rhs within 60 bracket doublings \
                 (rhs={rhs}, z={z}, h={h}, driver=`{}`)",
                driver.label()
            )));
        }
        width *= 2.0;
        if g_lo > 0.0 {
            lo = rhs - width;
            g_lo = g(lo);
        }
        if g_hi < 0.0 {
            hi = rhs + width;
            g_hi = g(hi);
        }
        if g_lo.is_nan() || g_hi.is_nan() {
            return Err(SchemeError::ImplicitSolveFailure(format!(
                "generator returned NaN while bracketing (rhs={rhs}, z={z}, h={h})"
            )));
        }
    }

    let tol = config.fixed_point_tolerance;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        if (hi - lo) <= tol * mid.abs().max(1.0) {
            break;
        }
        let g_mid = g(mid);
        if g_mid.is_nan() {
            return Err(SchemeError::ImplicitSolveFailure(format!(
                "generator returned NaN during bisection (rhs={rhs}, z={z}, h={h})"
            )));
        }
        if g_mid <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn cfg(theta: Theta) -> SchemeConfig {
        SchemeConfig::new(theta)
    }

    #[test]
    fn implicit_step_linear_closed_form() {
        let d = Driver::linear(-1.0, 0.0).unwrap();
        let y = implicit_step(3.0, 0.0, &d, 0.5, &cfg(Theta::Implicit)).unwrap();
        assert_eq!(y, 2.0);
    }

    #[test]
    fn implicit_step_y_free_is_single_iteration() {
        let d = Driver::abs_z(2.0);
        let y = implicit_step(1.5, -3.0, &d, 0.25, &cfg(Theta::Implicit)).unwrap();
        assert_eq!(y, 1.5 + 0.25 * 2.0 * 3.0);
    }

    #[test]
    fn implicit_step_monotone_cubic() {
        // y + y^3 = 2 has the unique real root y = 1.
        let d = Driver::custom("-y^3", |y, _| -y * y * y, None, 0.0, 0.0).unwrap();
        let y = implicit_step(2.0, 0.0, &d, 1.0, &cfg(Theta::Implicit)).unwrap();
        assert!((y - 1.0).abs() < 1e-11, "y = {y}");
    }

    #[test]
    fn explicit_requires_lipschitz_y() {
        let d = Driver::custom("-y^3", |y, _| -y * y * y, None, 0.0, 0.0).unwrap();
        let lat = Lattice::build(1.0, 4).unwrap();
        let err = solve_backward(&lat, &d, &cfg(Theta::PseudoExplicit), |_| 1.0);
        assert!(matches!(err, Err(SchemeError::IllPosed(_))));
    }

    #[test]
    fn ode_reduction_explicit_euler() {
        // Deterministic terminal 1, f(y) = a y: the scheme is the explicit
        // Euler iteration y <- y (1 + a h) run n times.
        let a = -1.2;
        let n = 50;
        let lat = Lattice::build(5.0, n).unwrap();
        let h = lat.step_size();
        let d = Driver::linear(a, 0.0).unwrap();
        let r = solve_backward(&lat, &d, &cfg(Theta::PseudoExplicit), |_| 1.0).unwrap();
        let expected = (1.0 + a * h).powi(n as i32);
        assert!((r.y0 - expected).abs() < 1e-13, "y0 = {}, want {}", r.y0, expected);
        assert!((r.z0).abs() < 1e-15);
        assert!(!r.diverged);
    }

    #[test]
    fn ode_reduction_implicit_euler() {
        let a = -1.2;
        let n = 50;
        let lat = Lattice::build(5.0, n).unwrap();
        let h = lat.step_size();
        let d = Driver::linear(a, 0.0).unwrap();
        let r = solve_backward(&lat, &d, &cfg(Theta::Implicit), |_| 1.0).unwrap();
        let expected = (1.0 - a * h).powi(-(n as i32));
        assert!((r.y0 - expected).abs() < 1e-13, "y0 = {}, want {}", r.y0, expected);
    }

    #[test]
    fn zero_driver_matches_manual_tree_expectation() {
        // n = 2 by hand: iterate the three-point weights twice.
        let lat = Lattice::build(1.0, 2).unwrap();
        let d = Driver::linear(0.0, 0.0).unwrap();
        let term = |x: f64| x.cos();
        let r = solve_backward(&lat, &d, &cfg(Theta::Implicit), term).unwrap();

        let dx = lat.increment();
        let level1: Vec<f64> = (-1..=1)
            .map(|j| {
                let x = j as f64 * dx;
                P_UP * (x + dx).cos() + P_MID * x.cos() + P_DOWN * (x - dx).cos()
            })
            .collect();
        let expected = P_UP * level1[2] + P_MID * level1[1] + P_DOWN * level1[0];
        assert!((r.y0 - expected).abs() < 1e-15);
    }

    #[test]
    fn y_free_driver_theta_variants_agree_exactly() {
        for driver in [
            Driver::linear(0.0, 3.0).unwrap(),
            Driver::abs_z(-2.5),
            Driver::atan_z(1.5),
        ] {
            let lat = Lattice::build(2.0, 30).unwrap();
            let imp = solve_backward(&lat, &driver, &cfg(Theta::Implicit), |x| x.cos()).unwrap();
            let exp =
                solve_backward(&lat, &driver, &cfg(Theta::PseudoExplicit), |x| x.cos()).unwrap();
            assert_eq!(imp.y0.to_bits(), exp.y0.to_bits(), "driver {}", driver.label());
            assert_eq!(imp.z0.to_bits(), exp.z0.to_bits());
        }
    }

    #[test]
    fn linear_z_driver_matches_closed_form_at_n300() {
        // f = z, terminal cos(W_T), T = 10: closed-form limit e^{-5} cos(10).
        let lat = Lattice::build(10.0, 300).unwrap();
        let d = Driver::linear(0.0, 1.0).unwrap();
        let r = solve_backward(&lat, &d, &cfg(Theta::Implicit), |x| x.cos()).unwrap();
        let target = (-5.0f64).exp() * 10.0f64.cos();
        let err = (r.y0 - target).abs();
        assert!(err < 2e-3, "err = {err}");
        assert!(err > 1e-5, "suspiciously exact: err = {err}");
    }

    #[test]
    fn divergence_sets_flag_instead_of_error() {
        // b = 20, h = 2: roughly 10x growth per step, overflows to infinity
        // long before the 360 steps are done.
        let lat = Lattice::build(720.0, 360).unwrap();
        let d = Driver::linear(0.0, 20.0).unwrap();
        let r = solve_backward(&lat, &d, &cfg(Theta::Implicit), |x| x.cos()).unwrap();
        assert!(r.diverged);
        assert!(r.y0.is_nan());
        assert_eq!(r.capped_y0(10.0), 10.0);
    }

    #[test]
    fn huge_but_finite_values_do_not_set_divergence() {
        // b = 5, h = 0.1: unstable but finite after 300 steps.
        let lat = Lattice::build(30.0, 300).unwrap();
        let d = Driver::linear(0.0, 5.0).unwrap();
        let r = solve_backward(&lat, &d, &cfg(Theta::Implicit), |x| x.cos()).unwrap();
        assert!(!r.diverged);
        assert!(r.y0.is_finite());
        assert!(r.y0.abs() > 10.0);
        assert_eq!(r.capped_y0(10.0), 10.0);
    }

    #[test]
    fn bound_preserved_under_trinomial_condition() {
        // theta = 1, y-free driver, h <= 1/(3 L_Z^2).
        for b in [0.5, 2.0, 5.0] {
            let h = 0.9 / (3.0 * b * b);
            let n = 120;
            let lat = Lattice::build(h * n as f64, n).unwrap();
            for d in [Driver::linear(0.0, b).unwrap(), Driver::abs_z(b), Driver::atan_z(b)] {
                let r = solve_backward(&lat, &d, &cfg(Theta::Implicit), |x| x.cos()).unwrap();
                assert!(!r.diverged);
                assert!(r.y0.abs() <= 1.0 + 1e-10, "b={b} driver={} y0={}", d.label(), r.y0);
            }
        }
    }

    #[test]
    fn keep_levels_stores_full_trajectory() {
        let lat = Lattice::build(1.0, 3).unwrap();
        let d = Driver::linear(0.0, 1.0).unwrap();
        let mut c = cfg(Theta::Implicit);
        c.keep_levels = true;
        let r = solve_backward(&lat, &d, &c, |x| x.cos()).unwrap();
        let levels = r.y_levels.unwrap();
        assert_eq!(levels.len(), 4);
        for (i, level) in levels.iter().enumerate() {
            assert_eq!(level.level(), i);
        }
        assert_eq!(levels[0].get(0), r.y0);
    }

    #[test]
    fn theta_round_trip() {
        assert_eq!(Theta::from_int(0), Some(Theta::PseudoExplicit));
        assert_eq!(Theta::from_int(1), Some(Theta::Implicit));
        assert_eq!(Theta::from_int(2), None);
        assert_eq!(Theta::Implicit.to_string(), "1");
    }
}
