//! Analytic stability engine.
//!
//! Two families of results live here, plus a brute-force oracle:
//!
//! * **Sufficient conditions** for numerical stability of the theta-scheme,
//!   expressed in the driver constants: the multidimensional condition
//!   `(√Λ L^Z + √h L^Y (1-θ))² / (2 l^Y) <= 1` and the one-dimensional
//!   condition `h [ (1-θ)² (L^Y)² / (2 l^Y) + L^Z max|H| ] <= 1`.
//! * **Von Neumann (VN) criteria** for linear drivers
//!   `f(y, z) = a·y + Σ b_ℓ z_ℓ` with `a <= 0`, driven by the per-step
//!   amplification factor of oscillatory terminal data `e^{i k·W_T}`. The
//!   effective gradient norm is `|b|∞ = max(|b⁺|, |b⁻|)`, the larger of the
//!   Euclidean norms of the positive and negative parts of `b`.
//!
//! The VN stability regions in the timestep `h` come in three shapes:
//! A-stable, the complement of a forbidden open interval (implicit scheme),
//! or a stable prefix `[0, h̄]` (pseudo-explicit scheme). The transition
//! between A-stable and forbidden-interval behaviour happens at the tangency
//! `(p̃, ũ) ≈ (0.103417, 7.35491)` of `ψ(p, u) = (1 + p u)² - u e^{1/u - 1}`
//! in the normalized variables `p = -a/|b|∞²`, `u = |b|∞² h`.
//!
//! All inequalities are evaluated non-strictly, so boundary points count as
//! stable. [`vn_oracle`] cross-checks the closed-form criteria by numerically
//! maximizing the amplification factor modulus.

use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::driver::Driver;
use crate::scheme::Theta;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("invalid stability input: {0}")]
    InvalidInput(String),
    #[error("root bracketing failed: {0}")]
    RootBracketFailure(String),
}

/// Constants entering the sufficient conditions.
///
/// `lambda_upper`/`lambda_lower` bound the normalized second moment of the
/// `H`-weights (`λ <= h E[|H|²] <= Λ`); both equal 1 for the trinomial tree.
/// `lambda_lower` is carried for completeness but no printed criterion uses
/// it. `max_abs_h` is only consumed by the one-dimensional condition.
#[derive(Debug, Clone)]
pub struct StabilityInputs {
    pub theta: Theta,
    /// `L^Y`; may be `+inf` to mark an absent Lipschitz-in-y bound. Only
    /// read when `theta = 0`.
    pub lipschitz_y: f64,
    pub lipschitz_z: f64,
    pub monotonicity_y: f64,
    pub lambda_upper: f64,
    pub lambda_lower: f64,
    pub h: f64,
    pub max_abs_h: f64,
}

impl StabilityInputs {
    /// Inputs for the trinomial lattice (`Λ = λ = 1`, `max|H| = sqrt(3/h)`)
    /// with constants read off a driver.
    pub fn trinomial(theta: Theta, driver: &Driver, h: f64) -> Result<Self, StabilityError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(StabilityError::InvalidInput(format!(
                "h must be positive and finite, got {h}"
            )));
        }
        Ok(Self {
            theta,
            lipschitz_y: driver.lipschitz_y().unwrap_or(f64::INFINITY),
            lipschitz_z: driver.lipschitz_z(),
            monotonicity_y: driver.monotonicity_y(),
            lambda_upper: 1.0,
            lambda_lower: 1.0,
            h,
            max_abs_h: (3.0 / h).sqrt(),
        })
    }

    fn validate_common(&self) -> Result<(), StabilityError> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(StabilityError::InvalidInput(format!(
                "h must be positive and finite, got {}",
                self.h
            )));
        }
        if !(self.lambda_upper > 0.0) || !self.lambda_upper.is_finite() {
            return Err(StabilityError::InvalidInput(format!(
                "Lambda must be positive and finite, got {}",
                self.lambda_upper
            )));
        }
        if !self.lipschitz_z.is_finite() || self.lipschitz_z < 0.0 {
            return Err(StabilityError::InvalidInput(format!(
                "L^Z must be finite and nonnegative, got {}",
                self.lipschitz_z
            )));
        }
        Ok(())
    }

    fn require_explicit_lipschitz_y(&self) -> Result<(), StabilityError> {
        if self.theta == Theta::PseudoExplicit
            && (!self.lipschitz_y.is_finite() || self.lipschitz_y < 0.0)
        {
            return Err(StabilityError::InvalidInput(format!(
                "theta = 0 requires a finite nonnegative L^Y, got {}",
                self.lipschitz_y
            )));
        }
        Ok(())
    }
}

/// Multidimensional sufficient condition
/// `(√Λ L^Z + √h L^Y (1-θ))² / (2 l^Y) <= 1`; requires `l^Y > 0`.
///
/// For the implicit scheme the condition is `Λ (L^Z)² <= 2 l^Y`,
/// independent of `h`, so satisfying it means A-stability.
pub fn sufficient_multidim(inputs: &StabilityInputs) -> Result<bool, StabilityError> {
    inputs.validate_common()?;
    inputs.require_explicit_lipschitz_y()?;
    if !(inputs.monotonicity_y > 0.0) || !inputs.monotonicity_y.is_finite() {
        return Err(StabilityError::InvalidInput(format!(
            "the multidimensional condition requires l^Y > 0, got {}",
            inputs.monotonicity_y
        )));
    }
    let base = inputs.lambda_upper.sqrt() * inputs.lipschitz_z;
    let sum = match inputs.theta {
        Theta::Implicit => base,
        Theta::PseudoExplicit => base + inputs.h.sqrt() * inputs.lipschitz_y,
    };
    Ok(sum * sum / (2.0 * inputs.monotonicity_y) <= 1.0)
}

/// One-dimensional sufficient condition
/// `h [ (1-θ)² (L^Y)² / (2 l^Y) + L^Z max|H| ] <= 1`.
///
/// The `(1-θ)²` term vanishes for the implicit scheme without dividing by
/// `l^Y`; for `θ = 0` the condition requires `l^Y > 0`. A finite `max|H|`
/// is mandatory (the weights must be bounded).
pub fn sufficient_unidim(inputs: &StabilityInputs) -> Result<bool, StabilityError> {
    inputs.validate_common()?;
    if !inputs.max_abs_h.is_finite() || inputs.max_abs_h < 0.0 {
        return Err(StabilityError::InvalidInput(format!(
            "the one-dimensional condition requires finite max|H|, got {}",
            inputs.max_abs_h
        )));
    }
    let y_term = match inputs.theta {
        Theta::Implicit => 0.0,
        Theta::PseudoExplicit => {
            inputs.require_explicit_lipschitz_y()?;
            if !(inputs.monotonicity_y > 0.0) || !inputs.monotonicity_y.is_finite() {
                return Err(StabilityError::InvalidInput(format!(
                    "theta = 0 requires l^Y > 0, got {}",
                    inputs.monotonicity_y
                )));
            }
            inputs.lipschitz_y * inputs.lipschitz_y / (2.0 * inputs.monotonicity_y)
        }
    };
    Ok(inputs.h * (y_term + inputs.lipschitz_z * inputs.max_abs_h) <= 1.0)
}

/// `|b|∞ = max(|b⁺|, |b⁻|)` with `b⁺ = (b₁∨0, …)`, `b⁻ = (b₁∧0, …)` and
/// `|·|` the Euclidean norm.
pub fn b_inf_norm(b: &[f64]) -> f64 {
    let mut pos = 0.0;
    let mut neg = 0.0;
    for &x in b {
        if x > 0.0 {
            pos += x * x;
        } else {
            neg += x * x;
        }
    }
    f64::max(pos.sqrt(), neg.sqrt())
}

/// Inputs to the Von Neumann analysis: a linear driver
/// `f(y, z) = a·y + Σ b_ℓ z_ℓ` with `a <= 0` and a timestep `h > 0`.
#[derive(Debug, Clone)]
pub struct LinearVnInputs {
    a: f64,
    b: Vec<f64>,
    h: f64,
}

impl LinearVnInputs {
    pub fn new(a: f64, b: Vec<f64>, h: f64) -> Result<Self, StabilityError> {
        if !(a <= 0.0) || !a.is_finite() {
            return Err(StabilityError::InvalidInput(format!(
                "VN analysis requires finite a <= 0, got {a}"
            )));
        }
        if b.is_empty() || b.iter().any(|x| !x.is_finite()) {
            return Err(StabilityError::InvalidInput(
                "b must be a nonempty finite vector".into(),
            ));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(StabilityError::InvalidInput(format!(
                "VN analysis requires finite h > 0, got {h}"
            )));
        }
        Ok(Self { a, b, h })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }
}

/// Per-step amplification factor `λ(k)` of the mode `e^{i k·W}`:
///
/// * `θ = 1`: `λ = (1 + i h b·k) e^{-|k|² h / 2} / (1 - a h)`;
/// * `θ = 0`: `λ = (1 + a h + i h b·k) e^{-|k|² h / 2}`.
pub fn amplification_factor(inputs: &LinearVnInputs, theta: Theta, k: &[f64]) -> Complex64 {
    assert_eq!(k.len(), inputs.b.len(), "k must have the driver's dimension");
    let bk: f64 = inputs.b.iter().zip(k).map(|(b, k)| b * k).sum();
    let k2: f64 = k.iter().map(|k| k * k).sum();
    let damp = (-k2 * inputs.h / 2.0).exp();
    match theta {
        Theta::Implicit => {
            Complex64::new(1.0, inputs.h * bk) * damp / (1.0 - inputs.a * inputs.h)
        }
        Theta::PseudoExplicit => Complex64::new(1.0 + inputs.a * inputs.h, inputs.h * bk) * damp,
    }
}

/// VN criterion for the implicit scheme: stable iff `|b|∞² h <= 1`, or
/// `|b|∞² h > 1` together with
/// `(1 - a h)² - |b|∞² h e^{1/(|b|∞² h) - 1} >= 0`. A zero gradient means
/// VN A-stability.
pub fn vn_stable_implicit(inputs: &LinearVnInputs) -> bool {
    let bn = b_inf_norm(&inputs.b);
    if bn == 0.0 {
        return true;
    }
    let u = bn * bn * inputs.h;
    if u <= 1.0 {
        return true;
    }
    (1.0 - inputs.a * inputs.h).powi(2) - u * (1.0 / u - 1.0).exp() >= 0.0
}

/// VN criterion for the pseudo-explicit scheme: stable iff
/// `|b|∞² h <= (1 + a h)²` and `h <= -2/a`, or `|b|∞² h > (1 + a h)²`
/// together with `1 - |b|∞² h e^{(1 + a h)²/(|b|∞² h) - 1} >= 0`. For
/// `a = 0` the constraint `h <= -2/a` is read as always satisfied.
pub fn vn_stable_explicit(inputs: &LinearVnInputs) -> bool {
    let bn = b_inf_norm(&inputs.b);
    let one_ah = 1.0 + inputs.a * inputs.h;
    let h_within_ode_limit = inputs.a == 0.0 || inputs.h <= -2.0 / inputs.a;
    if bn == 0.0 {
        return h_within_ode_limit;
    }
    let u = bn * bn * inputs.h;
    if u <= one_ah * one_ah {
        h_within_ode_limit
    } else {
        1.0 - u * (one_ah * one_ah / u - 1.0).exp() >= 0.0
    }
}

/// Brute-force VN verdict: numerically maximizes `|λ(k)|²` and reports
/// `sup <= 1 + 1e-9`.
///
/// The amplification modulus depends on the wave vector only through `|k|`
/// and `b·k`, so the search factorizes into a direction part (grid search
/// with iterated zoom over the nonnegative unit sphere — the domain covered
/// by the criteria's candidate analysis; the global sign flip `k -> -k`
/// leaves `|λ|` unchanged) and a radial part (logarithmic grid
/// `|k| ∈ {0} ∪ [1e-3, 1e3]` with 400 points, golden-section refined).
/// Testing helper for `d <= 3`; the closed-form criteria are the shipped
/// answer.
pub fn vn_oracle(inputs: &LinearVnInputs, theta: Theta) -> bool {
    let d = inputs.dim();
    assert!(d <= 3, "vn_oracle supports d <= 3, got d = {d}");

    let direction = best_direction(&inputs.b);
    let objective = |r: f64| {
        let k: Vec<f64> = direction.iter().map(|v| v * r).collect();
        amplification_factor(inputs, theta, &k).norm_sqr()
    };

    // Radial grid: 0 plus 400 log-spaced magnitudes.
    let mut radii = Vec::with_capacity(401);
    radii.push(0.0);
    let (lo, hi) = (1e-3f64, 1e3f64);
    for i in 0..400 {
        radii.push(lo * (hi / lo).powf(i as f64 / 399.0));
    }
    let mut best_idx = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &r) in radii.iter().enumerate() {
        let v = objective(r);
        if v > best_val {
            best_val = v;
            best_idx = i;
        }
    }

    // Extend past the last grid point if the maximum sits on the boundary.
    let mut upper = if best_idx + 1 < radii.len() {
        radii[best_idx + 1]
    } else {
        let mut r = radii[best_idx] * 2.0;
        while objective(r * 2.0) > objective(r) && r < 1e9 {
            r *= 2.0;
        }
        r * 2.0
    };
    let lower = if best_idx == 0 { 0.0 } else { radii[best_idx - 1] };
    if best_idx == 0 {
        upper = radii[1];
    }

    let sup = golden_max(objective, lower, upper).max(best_val);
    sup <= 1.0 + 1e-9
}

/// Maximizer of `|b·v|` over unit vectors `v` with nonnegative coordinates,
/// found by grid search with iterated zoom (no closed form used).
fn best_direction(b: &[f64]) -> Vec<f64> {
    match b.len() {
        1 => vec![1.0],
        2 => {
            let obj = |angle: f64| (b[0] * angle.cos() + b[1] * angle.sin()).abs();
            let angle = zoom_max_1d(obj, 0.0, std::f64::consts::FRAC_PI_2);
            vec![angle.cos(), angle.sin()]
        }
        3 => {
            let obj = |phi: f64, gamma: f64| {
                (b[0] * phi.sin() * gamma.cos()
                    + b[1] * phi.sin() * gamma.sin()
                    + b[2] * phi.cos())
                .abs()
            };
            let (phi, gamma) = zoom_max_2d(obj, std::f64::consts::FRAC_PI_2);
            vec![phi.sin() * gamma.cos(), phi.sin() * gamma.sin(), phi.cos()]
        }
        _ => unreachable!("vn_oracle is restricted to d <= 3"),
    }
}

fn zoom_max_1d(obj: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let mut center = lo;
    let mut width = hi - lo;
    let mut best_x = lo;
    let mut best_v = f64::NEG_INFINITY;
    // First pass over the full interval, then repeatedly zoom around the best
    // point; 16 rounds bring the grid spacing below 1e-12.
    for round in 0..16 {
        let (a, b) = if round == 0 {
            (lo, hi)
        } else {
            ((center - width).max(lo), (center + width).min(hi))
        };
        let points = if round == 0 { 800 } else { 32 };
        for i in 0..=points {
            let x = a + (b - a) * i as f64 / points as f64;
            let v = obj(x);
            if v > best_v {
                best_v = v;
                best_x = x;
            }
        }
        center = best_x;
        width = (if round == 0 { hi - lo } else { width }) / 8.0;
    }
    best_x
}

fn zoom_max_2d(obj: impl Fn(f64, f64) -> f64, hi: f64) -> (f64, f64) {
    let mut center = (0.0, 0.0);
    let mut width = hi;
    let mut best = (0.0, 0.0);
    let mut best_v = f64::NEG_INFINITY;
    for round in 0..18 {
        let (x0, x1, y0, y1) = if round == 0 {
            (0.0, hi, 0.0, hi)
        } else {
            (
                (center.0 - width).max(0.0),
                (center.0 + width).min(hi),
                (center.1 - width).max(0.0),
                (center.1 + width).min(hi),
            )
        };
        let points = if round == 0 { 120 } else { 16 };
        for i in 0..=points {
            let x = x0 + (x1 - x0) * i as f64 / points as f64;
            for j in 0..=points {
                let y = y0 + (y1 - y0) * j as f64 / points as f64;
                let v = obj(x, y);
                if v > best_v {
                    best_v = v;
                    best = (x, y);
                }
            }
        }
        center = best;
        width = (if round == 0 { hi } else { width }) / 6.0;
    }
    best
}

fn golden_max(obj: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = obj(x1);
    let mut f2 = obj(x2);
    for _ in 0..200 {
        if (hi - lo) <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = obj(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = obj(x1);
        }
    }
    f1.max(f2)
}

/// Shape of a VN stability region in the timestep `h`.
#[derive(Debug, Clone, PartialEq)]
pub enum VnRegion {
    /// Stable for every `h > 0`.
    AStable,
    /// Stable iff `h` lies outside the open interval `(h_low, h_high)`;
    /// `h_high` may be infinite.
    ForbiddenInterval { h_low: f64, h_high: f64 },
    /// Stable iff `h <= h_bar`.
    StablePrefix { h_bar: f64 },
}

impl VnRegion {
    pub fn is_stable_at(&self, h: f64) -> bool {
        match *self {
            VnRegion::AStable => true,
            VnRegion::ForbiddenInterval { h_low, h_high } => !(h > h_low && h < h_high),
            VnRegion::StablePrefix { h_bar } => h <= h_bar,
        }
    }
}

/// Normalized criterion function `ψ(p, u) = (1 + p u)² - u e^{1/u - 1}`,
/// the implicit VN criterion in the variables `p = -a/|b|∞²`, `u = |b|∞² h`.
fn psi(p: f64, u: f64) -> f64 {
    (1.0 + p * u).powi(2) - u * (1.0 / u - 1.0).exp()
}

/// Tangency point `(p̃, ũ)` of `ψ`: for `p >= p̃` the implicit scheme is VN
/// A-stable, below it a forbidden interval opens up. Computed by nested
/// bisection (outer on `p`, inner minimization of `ψ(p, ·)` over `u`) and
/// cached; numerically `(0.103417, 7.35491)`.
pub fn critical_constants() -> (f64, f64) {
    static CACHE: OnceLock<(f64, f64)> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let mut p_lo = 1e-6;
        let mut p_hi = 0.5;
        debug_assert!(min_psi_over_u(p_lo).1 < 0.0);
        debug_assert!(min_psi_over_u(p_hi).1 > 0.0);
        for _ in 0..60 {
            let p_mid = 0.5 * (p_lo + p_hi);
            if min_psi_over_u(p_mid).1 < 0.0 {
                p_lo = p_mid;
            } else {
                p_hi = p_mid;
            }
            if p_hi - p_lo <= 1e-12 {
                break;
            }
        }
        let p_tilde = 0.5 * (p_lo + p_hi);
        let (u_tilde, _) = min_psi_over_u(p_tilde);
        (p_tilde, u_tilde)
    })
}

/// Minimum of `ψ(p, ·)` over `u ∈ (1, 1e3]`: coarse log scan followed by
/// golden-section refinement. Returns `(argmin, min)`.
fn min_psi_over_u(p: f64) -> (f64, f64) {
    let f = |u: f64| psi(p, u);
    let n = 4000;
    let (lo, hi) = (1.0 + 1e-9, 1e3f64);
    let mut best_u = lo;
    let mut best_v = f64::INFINITY;
    for i in 0..=n {
        let u = lo * (hi / lo).powf(i as f64 / n as f64);
        let v = f(u);
        if v < best_v {
            best_v = v;
            best_u = u;
        }
    }
    let bracket_lo = (best_u / (hi / lo).powf(1.0 / n as f64)).max(lo);
    let bracket_hi = best_u * (hi / lo).powf(1.0 / n as f64);
    let u = golden_min(f, bracket_lo, bracket_hi);
    (u, f(u))
}

fn golden_min(obj: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (lo, hi);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = obj(x1);
    let mut f2 = obj(x2);
    for _ in 0..200 {
        if (hi - lo) <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
        if f1 > f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = obj(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = obj(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Sign-change bisection to relative tolerance `rel_tol`; `f(lo)` and
/// `f(hi)` must have opposite signs.
fn bisect_sign_change(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> f64 {
    let mut lo = lo;
    let mut hi = hi;
    let positive_at_lo = f(lo) > 0.0;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        if (hi - lo) <= rel_tol * mid.abs().max(1.0) {
            break;
        }
        if (f(mid) > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mid
}

/// VN stability region of the implicit scheme for the linear driver `(a, b)`.
///
/// `b = 0` or `-a/|b|∞² >= p̃` gives A-stability; otherwise the scheme is
/// stable iff `h` avoids the open interval `(u̲/|b|∞², ū/|b|∞²)` where
/// `u̲ < ũ < ū` are the two roots of `ψ(p, ·)` on `(1, ∞)`. The limit case
/// `a = 0` degenerates to the interval `(1/|b|∞², ∞)`.
pub fn implicit_region(a: f64, b: &[f64]) -> Result<VnRegion, StabilityError> {
    if !(a <= 0.0) || !a.is_finite() {
        return Err(StabilityError::InvalidInput(format!(
            "implicit_region requires finite a <= 0, got {a}"
        )));
    }
    let bn = b_inf_norm(b);
    if bn == 0.0 {
        return Ok(VnRegion::AStable);
    }
    let b2 = bn * bn;
    let p = -a / b2;
    if p == 0.0 {
        return Ok(VnRegion::ForbiddenInterval {
            h_low: 1.0 / b2,
            h_high: f64::INFINITY,
        });
    }
    let (p_tilde, u_tilde) = critical_constants();
    if p >= p_tilde || psi(p, u_tilde) >= 0.0 {
        return Ok(VnRegion::AStable);
    }

    let f = |u: f64| psi(p, u);
    // psi(p, 1) = 2p + p² > 0 and psi(p, u_tilde) < 0.
    let u_lower = bisect_sign_change(f, 1.0, u_tilde, 1e-10);

    let mut lo = u_tilde;
    let mut hi = u_tilde;
    let mut found = false;
    for _ in 0..200 {
        hi *= 2.0;
        if f(hi) >= 0.0 {
            found = true;
            break;
        }
        lo = hi;
    }
    if !found {
        return Err(StabilityError::RootBracketFailure(format!(
            "no upper root of the normalized criterion within 200 doublings (p = {p})"
        )));
    }
    let u_upper = bisect_sign_change(f, lo, hi, 1e-10);

    Ok(VnRegion::ForbiddenInterval {
        h_low: u_lower / b2,
        h_high: u_upper / b2,
    })
}

/// VN stability region of the pseudo-explicit scheme: always a stable
/// prefix `[0, h̄]`.
///
/// `-a/|b|∞² >= 2` gives the ODE limit `h̄ = -2/a`; otherwise `h̄` is the
/// unique root of `1 - |b|∞² h e^{(1 + a h)²/(|b|∞² h) - 1}` in
/// `[1/|b|∞², -2/a)`, which collapses to exactly `1/|b|∞²` when `a = 0`.
/// Rejects the degenerate pair `a = 0, b = 0`.
pub fn explicit_region(a: f64, b: &[f64]) -> Result<VnRegion, StabilityError> {
    if !(a <= 0.0) || !a.is_finite() {
        return Err(StabilityError::InvalidInput(format!(
            "explicit_region requires finite a <= 0, got {a}"
        )));
    }
    let bn = b_inf_norm(b);
    if bn == 0.0 {
        if a == 0.0 {
            return Err(StabilityError::InvalidInput(
                "explicit_region is undefined for a = 0 with b = 0 (stable for every h)".into(),
            ));
        }
        return Ok(VnRegion::StablePrefix { h_bar: -2.0 / a });
    }
    let b2 = bn * bn;
    let p = -a / b2;
    if p >= 2.0 {
        return Ok(VnRegion::StablePrefix { h_bar: -2.0 / a });
    }
    if a == 0.0 {
        return Ok(VnRegion::StablePrefix { h_bar: 1.0 / b2 });
    }
    // G(1/b2) > 0 for p > 0 and G(-2/a) < 0 for p < 2.
    let g = |h: f64| 1.0 - b2 * h * ((1.0 + a * h).powi(2) / (b2 * h) - 1.0).exp();
    let h_bar = bisect_sign_change(g, 1.0 / b2, -2.0 / a, 1e-10);
    Ok(VnRegion::StablePrefix { h_bar })
}
