//! Brute-force reference implementations shared by the integration tests.
//!
//! These deliberately avoid the library's recombining level-by-level path:
//! expectations are taken by walking the full 3^n path tree branch by
//! branch, and implicit steps are solved by plain bisection. Agreement with
//! `solve_backward` then checks the whole pipeline, not a refactoring of it.
#![allow(dead_code)]

use bsde_stab::driver::Driver;
use bsde_stab::scheme::Theta;
use bsde_stab::stability::b_inf_norm;

pub const PROBS: [f64; 3] = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];
pub const MOVES: [i64; 3] = [1, 0, -1];

/// `E[terminal(W_T)]` by enumerating all `3^n` paths with product weights.
pub fn tree_expectation(horizon: f64, steps: usize, terminal: &dyn Fn(f64) -> f64) -> f64 {
    let h = horizon / steps as f64;
    let delta = (3.0 * h).sqrt();
    let count = 3usize.pow(steps as u32);
    let mut total = 0.0;
    for code in 0..count {
        let mut rest = code;
        let mut offset = 0i64;
        let mut weight = 1.0;
        for _ in 0..steps {
            let branch = rest % 3;
            rest /= 3;
            weight *= PROBS[branch];
            offset += MOVES[branch];
        }
        total += weight * terminal(offset as f64 * delta);
    }
    total
}

/// Nested-expectation evaluation of the theta-scheme over the full path
/// tree (exponential recursion, fine for `n <= 6`). The implicit step is
/// solved by bisection, independently of the library's solver ladder.
pub fn solve_brute(
    horizon: f64,
    steps: usize,
    driver: &Driver,
    theta: Theta,
    terminal: &dyn Fn(f64) -> f64,
) -> f64 {
    let h = horizon / steps as f64;
    let delta = (3.0 * h).sqrt();
    path_value(0, 0, steps, h, delta, driver, theta, terminal)
}

#[allow(clippy::too_many_arguments)]
fn path_value(
    level: usize,
    offset: i64,
    steps: usize,
    h: f64,
    delta: f64,
    driver: &Driver,
    theta: Theta,
    terminal: &dyn Fn(f64) -> f64,
) -> f64 {
    if level == steps {
        return terminal(offset as f64 * delta);
    }
    let up = path_value(level + 1, offset + 1, steps, h, delta, driver, theta, terminal);
    let mid = path_value(level + 1, offset, steps, h, delta, driver, theta, terminal);
    let down = path_value(level + 1, offset - 1, steps, h, delta, driver, theta, terminal);

    let e_y = PROBS[0] * up + PROBS[1] * mid + PROBS[2] * down;
    // Z = E[Y_{i+1} ΔW] / h over the three branches.
    let z = (PROBS[0] * up * delta + PROBS[2] * down * (-delta)) / h;
    match theta {
        Theta::PseudoExplicit => {
            let f_avg = PROBS[0] * driver.evaluate(up, z)
                + PROBS[1] * driver.evaluate(mid, z)
                + PROBS[2] * driver.evaluate(down, z);
            e_y + h * f_avg
        }
        Theta::Implicit => bisect_implicit(e_y, z, driver, h),
    }
}

/// Plain-bisection solve of `y = rhs + h f(y, z)`.
pub fn bisect_implicit(rhs: f64, z: f64, driver: &Driver, h: f64) -> f64 {
    let g = |y: f64| y - h * driver.evaluate(y, z) - rhs;
    let mut width = rhs.abs().max(1.0);
    let mut lo = rhs - width;
    let mut hi = rhs + width;
    for _ in 0..100 {
        if g(lo) <= 0.0 {
            break;
        }
        width *= 2.0;
        lo = rhs - width;
    }
    for _ in 0..100 {
        if g(hi) >= 0.0 {
            break;
        }
        width *= 2.0;
        hi = rhs + width;
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..300 {
        mid = 0.5 * (lo + hi);
        if (hi - lo) <= 1e-14 * mid.abs().max(1.0) {
            break;
        }
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mid
}

/// Distance of a VN configuration from its decision boundary, measured in
/// the criterion value. Draws with a margin below the test threshold are
/// too close to the boundary for a grid-based oracle to classify reliably.
pub fn vn_margin(a: f64, b: &[f64], h: f64, theta: Theta) -> f64 {
    let bn = b_inf_norm(b);
    match theta {
        Theta::Implicit => {
            if bn == 0.0 {
                return f64::INFINITY;
            }
            let u = bn * bn * h;
            if u <= 1.0 {
                f64::INFINITY
            } else {
                ((1.0 - a * h).powi(2) - u * (1.0 / u - 1.0).exp()).abs()
            }
        }
        Theta::PseudoExplicit => {
            let one_ah_sq = (1.0 + a * h).powi(2);
            if bn == 0.0 {
                return (one_ah_sq - 1.0).abs();
            }
            let u = bn * bn * h;
            if u <= one_ah_sq {
                (one_ah_sq - 1.0).abs()
            } else {
                (1.0 - u * (one_ah_sq / u - 1.0).exp()).abs()
            }
        }
    }
}
