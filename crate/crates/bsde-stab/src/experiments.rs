//! Numerical studies built on the scheme: convergence tables against the
//! closed-form benchmark, stability heatmap sweeps over parameter/timestep
//! grids, and Von Neumann region tables.

use rayon::prelude::*;
use thiserror::Error;

use crate::driver::{Driver, DriverError};
use crate::lattice::{Lattice, LatticeError};
use crate::scheme::{solve_backward, SchemeConfig, SchemeError, Theta};
use crate::stability::{
    critical_constants, explicit_region, implicit_region, vn_stable_explicit, vn_stable_implicit,
    b_inf_norm, LinearVnInputs, StabilityError, VnRegion,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Driver(#[from] DriverError),
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
}

/// Closed-form benchmark `Y_0 = e^{-α² T / 2} cos(α b T)` for the driver
/// `f(y, z) = b z` with terminal data `cos(α W_T)`.
pub fn closed_form_y0(alpha: f64, b: f64, horizon: f64) -> f64 {
    assert!(horizon > 0.0, "horizon must be positive");
    (-alpha * alpha * horizon / 2.0).exp() * (alpha * b * horizon).cos()
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub y0: f64,
    pub closed_form: f64,
    pub abs_error: f64,
    /// Observed order between this row and the previous one,
    /// `log(e_prev/e) / log(n/n_prev)`.
    pub local_order: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub alpha: f64,
    pub b: f64,
    pub horizon: f64,
    pub theta: Theta,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log(error)` against `log(n)` over the largest
    /// contiguous window of rows with finite positive error below 1.
    pub fitted_slope: Option<f64>,
}

impl ConvergenceStudy {
    /// OLS slope over `rows[from..]`, ignoring the automatic window.
    pub fn slope_over_tail(&self, from: usize) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self.rows[from.min(self.rows.len())..]
            .iter()
            .filter(|r| r.abs_error.is_finite() && r.abs_error > 0.0)
            .map(|r| ((r.n as f64).ln(), r.abs_error.ln()))
            .collect();
        ols_slope(&pts)
    }
}

fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Runs the scheme for `f(y, z) = b z`, terminal `cos(α W_T)`, on each step
/// count in `n_list` (strictly increasing) and tabulates the error against
/// [`closed_form_y0`]. Diverged solves are recorded with infinite error and
/// excluded from the slope window.
pub fn convergence_study(
    alpha: f64,
    b: f64,
    horizon: f64,
    theta: Theta,
    n_list: &[usize],
) -> Result<ConvergenceStudy, ExperimentError> {
    if n_list.is_empty() {
        return Err(ExperimentError::InvalidConfig("n_list must be nonempty".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::InvalidConfig(
            "n_list must be strictly increasing".into(),
        ));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(ExperimentError::InvalidConfig(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    let driver = Driver::linear(0.0, b)?;
    let config = SchemeConfig::new(theta);
    let target = closed_form_y0(alpha, b, horizon);

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let lattice = Lattice::build(horizon, n)?;
        let result = solve_backward(&lattice, &driver, &config, |x| (alpha * x).cos())?;
        let abs_error = if result.diverged || !result.y0.is_finite() {
            f64::INFINITY
        } else {
            (result.y0 - target).abs()
        };
        let local_order = rows.last().and_then(|prev: &ConvergenceRow| {
            let ok = prev.abs_error.is_finite()
                && prev.abs_error > 0.0
                && abs_error.is_finite()
                && abs_error > 0.0;
            ok.then(|| (prev.abs_error / abs_error).ln() / (n as f64 / prev.n as f64).ln())
        });
        rows.push(ConvergenceRow {
            n,
            h: lattice.step_size(),
            y0: result.y0,
            closed_form: target,
            abs_error,
            local_order,
        });
    }

    let fitted_slope = fit_slope_auto(&rows);
    Ok(ConvergenceStudy {
        alpha,
        b,
        horizon,
        theta,
        rows,
        fitted_slope,
    })
}

/// Largest contiguous run of rows with finite positive error below 1, then
/// OLS of log-error on log-n over that window.
fn fit_slope_auto(rows: &[ConvergenceRow]) -> Option<f64> {
    let usable: Vec<bool> = rows
        .iter()
        .map(|r| r.abs_error.is_finite() && r.abs_error > 0.0 && r.abs_error < 1.0)
        .collect();
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (i, &ok) in usable.iter().enumerate() {
        if ok && start.is_none() {
            start = Some(i);
        }
        if !ok || i + 1 == usable.len() {
            if let Some(s) = start.take() {
                let end = if ok { i + 1 } else { i };
                if best.map_or(true, |(bs, be)| end - s > be - bs) {
                    best = Some((s, end));
                }
            }
        }
    }
    let (s, e) = best?;
    let pts: Vec<(f64, f64)> = rows[s..e]
        .iter()
        .map(|r| ((r.n as f64).ln(), r.abs_error.ln()))
        .collect();
    ols_slope(&pts)
}

/// Bounded terminal data, evaluated at the terminal Brownian value.
#[derive(Debug, Clone, Copy)]
pub enum Terminal {
    /// `cos(α x)`.
    Cosine { alpha: f64 },
    /// Deterministic constant.
    Constant { value: f64 },
}

impl Terminal {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Terminal::Cosine { alpha } => (alpha * x).cos(),
            Terminal::Constant { value } => value,
        }
    }

    pub fn sup_abs(&self) -> f64 {
        match *self {
            Terminal::Cosine { .. } => 1.0,
            Terminal::Constant { value } => value.abs(),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Terminal::Cosine { alpha } => format!("cos({alpha}*x)"),
            Terminal::Constant { value } => format!("const({value})"),
        }
    }
}

/// Driver family swept along the parameter axis.
#[derive(Debug, Clone, Copy)]
pub enum SweepFamily {
    /// `f(y, z) = a·y + b·z` with fixed `b`; the sweep parameter is `a`.
    LinearDrift { b: f64 },
    /// `f(z) = b·z`; the sweep parameter is `b`.
    LinearZ,
    /// `f(z) = b·|z|`; the sweep parameter is `b`.
    AbsZ,
    /// `f(z) = atan(b·z)`; the sweep parameter is `b`.
    AtanZ,
}

impl SweepFamily {
    pub fn param_name(&self) -> &'static str {
        match self {
            SweepFamily::LinearDrift { .. } => "a",
            _ => "b",
        }
    }

    pub fn label(&self) -> String {
        match self {
            SweepFamily::LinearDrift { b } => format!("a_with_fixed_bz(b={b})"),
            SweepFamily::LinearZ => "bz".into(),
            SweepFamily::AbsZ => "abs_z".into(),
            SweepFamily::AtanZ => "atan_z".into(),
        }
    }

    pub fn driver(&self, x: f64) -> Result<Driver, DriverError> {
        match *self {
            SweepFamily::LinearDrift { b } => Driver::linear(x, b),
            SweepFamily::LinearZ => Driver::linear(0.0, x),
            SweepFamily::AbsZ => Ok(Driver::abs_z(x)),
            SweepFamily::AtanZ => Ok(Driver::atan_z(x)),
        }
    }
}

/// Inclusive range descriptor with `count` grid points.
#[derive(Debug, Clone, Copy)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self, ExperimentError> {
        if count == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(ExperimentError::InvalidConfig(format!(
                "invalid grid range [{lo}, {hi}] with {count} points"
            )));
        }
        Ok(Self { lo, hi, count })
    }

    /// Evenly spaced values including both endpoints.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        (0..self.count)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64)
            .collect()
    }

    /// Timestep grid: like [`Self::values`] when `lo > 0`, otherwise the
    /// half-open convention `hi·k/count` for `k = 1..=count`, covering
    /// `(lo, hi]` without the degenerate `h = 0`.
    pub fn h_values(&self) -> Vec<f64> {
        if self.lo > 0.0 {
            return self.values();
        }
        (1..=self.count)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / self.count as f64)
            .collect()
    }
}

/// How the lattice is sized per sweep cell.
#[derive(Debug, Clone, Copy)]
pub enum SweepProtocol {
    /// Fixed step count `n`; the horizon `T = n·h` grows with the timestep.
    FixedStepCount(usize),
    /// Fixed horizon `T`; the step count is `ceil(T/h)` and the effective
    /// timestep `T/n` is rounded accordingly.
    FixedHorizon(f64),
}

/// Heatmap data: `matrix[ix][ih] = |Y_0| ∧ cap` for the driver at parameter
/// `x_values[ix]` and timestep `h_values[ih]`.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub param_name: String,
    pub x_values: Vec<f64>,
    pub h_values: Vec<f64>,
    pub matrix: Vec<Vec<f64>>,
    pub diverged: Vec<Vec<bool>>,
    pub theta: Theta,
    pub protocol: SweepProtocol,
    pub family_label: String,
    pub terminal_label: String,
    pub cap: f64,
}

/// Sweeps the scheme output over the parameter/timestep grid. Cells are
/// solved in parallel (capped by the `BSDE_STAB_THREADS` environment
/// variable; 0 or unset picks the default pool) and recorded by cell index,
/// so output ordering is deterministic. Divergent or failed solves are
/// recorded as `cap` with the `diverged` mark rather than aborting the
/// sweep.
pub fn stability_sweep(
    family: SweepFamily,
    x_range: GridRange,
    h_range: GridRange,
    protocol: SweepProtocol,
    theta: Theta,
    terminal: Terminal,
    cap: f64,
) -> Result<SweepResult, ExperimentError> {
    if !(cap > 0.0) {
        return Err(ExperimentError::InvalidConfig(format!(
            "cap must be positive, got {cap}"
        )));
    }
    match protocol {
        SweepProtocol::FixedStepCount(0) => {
            return Err(ExperimentError::InvalidConfig("step count must be positive".into()))
        }
        SweepProtocol::FixedHorizon(t) if !(t > 0.0) => {
            return Err(ExperimentError::InvalidConfig(format!(
                "fixed horizon must be positive, got {t}"
            )))
        }
        _ => {}
    }
    let x_values = x_range.values();
    let h_values = h_range.h_values();
    // Surface driver construction errors (e.g. a > 0) before spawning work.
    let drivers: Vec<Driver> = x_values
        .iter()
        .map(|&x| family.driver(x))
        .collect::<Result<_, _>>()?;

    let config = SchemeConfig::new(theta);
    let cells: Vec<(f64, bool)> = run_cells(x_values.len() * h_values.len(), |idx| {
        let ix = idx / h_values.len();
        let ih = idx % h_values.len();
        let h = h_values[ih];
        let (horizon, n) = match protocol {
            SweepProtocol::FixedStepCount(n) => (h * n as f64, n),
            SweepProtocol::FixedHorizon(t) => (t, (t / h).ceil().max(1.0) as usize),
        };
        let solved = Lattice::build(horizon, n)
            .map_err(|_| ())
            .and_then(|lattice| {
                solve_backward(&lattice, &drivers[ix], &config, |x| terminal.eval(x))
                    .map_err(|_| ())
            });
        match solved {
            Ok(r) => (r.capped_y0(cap), r.diverged),
            Err(()) => (cap, true),
        }
    });

    let mut matrix = Vec::with_capacity(x_values.len());
    let mut diverged = Vec::with_capacity(x_values.len());
    for chunk in cells.chunks(h_values.len()) {
        matrix.push(chunk.iter().map(|c| c.0).collect());
        diverged.push(chunk.iter().map(|c| c.1).collect());
    }

    Ok(SweepResult {
        param_name: family.param_name().to_string(),
        x_values,
        h_values,
        matrix,
        diverged,
        theta,
        protocol,
        family_label: family.label(),
        terminal_label: terminal.label(),
        cap,
    })
}

/// Parallel map over cell indices honoring `BSDE_STAB_THREADS`.
fn run_cells<T: Send>(count: usize, cell: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    let requested = std::env::var("BSDE_STAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&k| k > 0);
    match requested.and_then(|k| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .ok()
    }) {
        Some(pool) => pool.install(|| (0..count).into_par_iter().map(cell).collect()),
        None => (0..count).into_par_iter().map(cell).collect(),
    }
}

/// One analytic boundary curve in the `(a, h)` plane.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Von Neumann verdict matrix with the analytic boundary curves overlaid.
#[derive(Debug, Clone)]
pub struct VnRegionTable {
    pub theta: Theta,
    pub b: Vec<f64>,
    pub a_values: Vec<f64>,
    pub h_values: Vec<f64>,
    /// `verdicts[ia][ih]`: true when stable.
    pub verdicts: Vec<Vec<bool>>,
    pub boundaries: Vec<BoundaryCurve>,
    /// Tangency marker `(|b|∞ p̃, ũ/|b|∞²)` for the implicit scheme.
    pub point_a: Option<(f64, f64)>,
}

/// Tabulates the VN criterion over an `(a, h)` grid and emits the analytic
/// region boundaries (forbidden-interval edges for the implicit scheme, the
/// stable prefix and the ODE limit `-2/a` for the pseudo-explicit scheme).
pub fn vn_region_table(
    theta: Theta,
    a_range: GridRange,
    b: &[f64],
    h_range: GridRange,
) -> Result<VnRegionTable, ExperimentError> {
    let a_values = a_range.values();
    let h_values = h_range.h_values();
    if a_values.iter().any(|&a| a > 0.0) {
        return Err(ExperimentError::InvalidConfig(
            "the drift axis must satisfy a <= 0".into(),
        ));
    }

    let mut verdicts = Vec::with_capacity(a_values.len());
    for &a in &a_values {
        let mut row = Vec::with_capacity(h_values.len());
        for &h in &h_values {
            let inputs = LinearVnInputs::new(a, b.to_vec(), h)?;
            row.push(match theta {
                Theta::Implicit => vn_stable_implicit(&inputs),
                Theta::PseudoExplicit => vn_stable_explicit(&inputs),
            });
        }
        verdicts.push(row);
    }

    let bn = b_inf_norm(b);
    let mut boundaries = Vec::new();
    let mut point_a = None;
    match theta {
        Theta::Implicit => {
            let mut low = Vec::new();
            let mut high = Vec::new();
            for &a in &a_values {
                if let VnRegion::ForbiddenInterval { h_low, h_high } = implicit_region(a, b)? {
                    low.push((a, h_low));
                    if h_high.is_finite() {
                        high.push((a, h_high));
                    }
                }
            }
            boundaries.push(BoundaryCurve { name: "h_low".into(), points: low });
            boundaries.push(BoundaryCurve { name: "h_high".into(), points: high });
            if bn > 0.0 {
                let (p_tilde, u_tilde) = critical_constants();
                point_a = Some((bn * p_tilde, u_tilde / (bn * bn)));
            }
        }
        Theta::PseudoExplicit => {
            let mut prefix = Vec::new();
            let mut ode_limit = Vec::new();
            for &a in &a_values {
                if !(bn == 0.0 && a == 0.0) {
                    if let VnRegion::StablePrefix { h_bar } = explicit_region(a, b)? {
                        prefix.push((a, h_bar));
                    }
                }
                if a < 0.0 {
                    ode_limit.push((a, -2.0 / a));
                }
            }
            boundaries.push(BoundaryCurve { name: "h_bar".into(), points: prefix });
            boundaries.push(BoundaryCurve { name: "minus_two_over_a".into(), points: ode_limit });
        }
    }

    Ok(VnRegionTable {
        theta,
        b: b.to_vec(),
        a_values,
        h_values,
        verdicts,
        boundaries,
        point_a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        assert!((closed_form_y0(1.0, 0.0, 2.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(closed_form_y0(0.0, 5.0, 10.0), 1.0);
        let v = closed_form_y0(1.0, 1.0, 10.0);
        assert!((v - (-5.0f64).exp() * 10.0f64.cos()).abs() < 1e-15);
        assert!((v + 5.654e-3).abs() < 1e-5);
    }

    #[test]
    fn convergence_slope_near_first_order() {
        let s = convergence_study(1.0, 1.0, 10.0, Theta::Implicit, &[64, 128, 256, 512]).unwrap();
        let slope = s.fitted_slope.unwrap();
        assert!((-1.3..=-0.7).contains(&slope), "slope = {slope}");
        for w in s.rows.windows(2) {
            assert!(w[1].abs_error <= w[0].abs_error * 1.05);
        }
    }

    #[test]
    fn convergence_transient_for_large_gradient() {
        // b = 5, T = 10: wild transient until n approaches 250.
        let n_list: Vec<usize> = (50..=200).step_by(25).collect();
        let s = convergence_study(1.0, 5.0, 10.0, Theta::Implicit, &n_list).unwrap();
        assert!(s.rows.iter().any(|r| r.y0.abs() > 1.0));
        let s = convergence_study(1.0, 5.0, 10.0, Theta::Implicit, &[400]).unwrap();
        assert!(s.rows[0].y0.abs() <= 1.0);
    }

    #[test]
    fn convergence_rejects_bad_n_list() {
        assert!(convergence_study(1.0, 1.0, 1.0, Theta::Implicit, &[]).is_err());
        assert!(convergence_study(1.0, 1.0, 1.0, Theta::Implicit, &[8, 8]).is_err());
        assert!(convergence_study(1.0, 1.0, 1.0, Theta::Implicit, &[16, 8]).is_err());
    }

    #[test]
    fn grid_range_values() {
        let g = GridRange::new(-3.0, 0.0, 4).unwrap();
        assert_eq!(g.values(), vec![-3.0, -2.0, -1.0, 0.0]);
        let h = GridRange::new(0.0, 2.0, 4).unwrap();
        assert_eq!(h.h_values(), vec![0.5, 1.0, 1.5, 2.0]);
        let h = GridRange::new(0.5, 2.0, 4).unwrap();
        assert_eq!(h.h_values(), vec![0.5, 1.0, 1.5, 2.0]);
        assert!(GridRange::new(1.0, 0.0, 3).is_err());
        assert!(GridRange::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn sweep_bz_slice_matches_predicted_boundary() {
        // b = 5, theta = 1: stable for h <= 0.04, capped by h = 0.1.
        let result = stability_sweep(
            SweepFamily::LinearZ,
            GridRange::new(5.0, 5.0, 1).unwrap(),
            GridRange::new(0.01, 0.04, 4).unwrap(),
            SweepProtocol::FixedStepCount(300),
            Theta::Implicit,
            Terminal::Cosine { alpha: 1.0 },
            10.0,
        )
        .unwrap();
        for (ih, &v) in result.matrix[0].iter().enumerate() {
            assert!(v <= 1.0 + 1e-12, "h = {}, v = {v}", result.h_values[ih]);
        }

        let result = stability_sweep(
            SweepFamily::LinearZ,
            GridRange::new(5.0, 5.0, 1).unwrap(),
            GridRange::new(0.1, 2.0, 4).unwrap(),
            SweepProtocol::FixedStepCount(300),
            Theta::Implicit,
            Terminal::Cosine { alpha: 1.0 },
            10.0,
        )
        .unwrap();
        for &v in &result.matrix[0] {
            assert_eq!(v, 10.0);
        }
    }

    #[test]
    fn sweep_zero_driver_stays_bounded() {
        let result = stability_sweep(
            SweepFamily::LinearZ,
            GridRange::new(0.0, 0.0, 1).unwrap(),
            GridRange::new(0.0, 2.0, 5).unwrap(),
            SweepProtocol::FixedStepCount(40),
            Theta::Implicit,
            Terminal::Cosine { alpha: 1.0 },
            10.0,
        )
        .unwrap();
        for &v in &result.matrix[0] {
            assert!(v <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn sweep_rejects_positive_drift_range() {
        let err = stability_sweep(
            SweepFamily::LinearDrift { b: 5.0 },
            GridRange::new(-1.0, 1.0, 3).unwrap(),
            GridRange::new(0.0, 1.0, 2).unwrap(),
            SweepProtocol::FixedStepCount(10),
            Theta::Implicit,
            Terminal::Cosine { alpha: 1.0 },
            10.0,
        );
        assert!(err.is_err());
    }

    #[test]
    fn sweep_fixed_horizon_protocol() {
        let result = stability_sweep(
            SweepFamily::LinearZ,
            GridRange::new(1.0, 1.0, 1).unwrap(),
            GridRange::new(0.0, 1.0, 4).unwrap(),
            SweepProtocol::FixedHorizon(10.0),
            Theta::Implicit,
            Terminal::Cosine { alpha: 1.0 },
            10.0,
        )
        .unwrap();
        assert_eq!(result.matrix[0].len(), 4);
        for &v in &result.matrix[0] {
            assert!(v.is_finite());
        }
    }

    #[test]
    fn vn_region_table_matches_pointwise_criteria() {
        let table = vn_region_table(
            Theta::Implicit,
            GridRange::new(-3.0, 0.0, 7).unwrap(),
            &[5.0],
            GridRange::new(0.0, 2.0, 9).unwrap(),
        )
        .unwrap();
        for (ia, &a) in table.a_values.iter().enumerate() {
            for (ih, &h) in table.h_values.iter().enumerate() {
                let inputs = LinearVnInputs::new(a, vec![5.0], h).unwrap();
                assert_eq!(table.verdicts[ia][ih], vn_stable_implicit(&inputs));
            }
        }
        assert!(table.point_a.is_some());
        let (ax, ay) = table.point_a.unwrap();
        assert!((ax - 5.0 * 0.103417).abs() < 1e-3);
        assert!((ay - 7.35491 / 25.0).abs() < 1e-4);
    }

    #[test]
    fn sweep_cells_satisfying_sufficient_condition_stay_bounded() {
        use crate::stability::{sufficient_unidim, StabilityInputs};
        let families = [
            SweepFamily::LinearDrift { b: 2.0 },
            SweepFamily::LinearZ,
            SweepFamily::AbsZ,
            SweepFamily::AtanZ,
        ];
        for family in families {
            let x_range = match family {
                SweepFamily::LinearDrift { .. } => GridRange::new(-2.0, 0.0, 5).unwrap(),
                _ => GridRange::new(-4.0, 4.0, 5).unwrap(),
            };
            let result = stability_sweep(
                family,
                x_range,
                GridRange::new(0.0, 1.0, 12).unwrap(),
                SweepProtocol::FixedStepCount(40),
                Theta::Implicit,
                Terminal::Cosine { alpha: 1.0 },
                10.0,
            )
            .unwrap();
            for (ix, &x) in result.x_values.iter().enumerate() {
                let driver = family.driver(x).unwrap();
                for (ih, &h) in result.h_values.iter().enumerate() {
                    let inputs = StabilityInputs::trinomial(Theta::Implicit, &driver, h).unwrap();
                    if sufficient_unidim(&inputs).unwrap() {
                        assert!(
                            result.matrix[ix][ih] <= 1.0 + 1e-10,
                            "family {} x={x} h={h}: {}",
                            result.family_label,
                            result.matrix[ix][ih]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn vn_region_table_zero_gradient_column() {
        // b = 0, theta = 0: stable iff h <= -2/a.
        let table = vn_region_table(
            Theta::PseudoExplicit,
            GridRange::new(-1.0, -1.0, 1).unwrap(),
            &[0.0],
            GridRange::new(0.0, 4.0, 16).unwrap(),
        )
        .unwrap();
        for (ih, &h) in table.h_values.iter().enumerate() {
            assert_eq!(table.verdicts[0][ih], h <= 2.0, "h = {h}");
        }
    }

    #[test]
    fn vn_region_table_explicit_row_thresholds() {
        // a = 0 row: stable iff h <= 1/25; b = 0 column behaviour checked
        // through the boundary curve -2/a.
        let table = vn_region_table(
            Theta::PseudoExplicit,
            GridRange::new(-1.0, 0.0, 2).unwrap(),
            &[5.0],
            GridRange::new(0.0, 0.08, 8).unwrap(),
        )
        .unwrap();
        let row0 = &table.verdicts[1]; // a = 0
        for (ih, &h) in table.h_values.iter().enumerate() {
            assert_eq!(row0[ih], h <= 1.0 / 25.0 + 1e-15, "h = {h}");
        }
        let curve = table
            .boundaries
            .iter()
            .find(|c| c.name == "minus_two_over_a")
            .unwrap();
        assert_eq!(curve.points.len(), 1);
        assert_eq!(curve.points[0], (-1.0, 2.0));
    }
}
