//! Recombining trinomial lattice approximating a standard Brownian motion on
//! a uniform time grid.
//!
//! One-step increments take the values `+δ`, `0`, `-δ` with `δ = sqrt(3h)`
//! and probabilities `1/6`, `2/3`, `1/6`. This matches the Gaussian moments
//! up to fourth order (`E[ΔW] = 0`, `E[ΔW²] = h`, `E[ΔW³] = 0`,
//! `E[ΔW⁴] = 3h²`). Because the spatial spacing is a fixed multiple of `δ`,
//! the tree recombines exactly: level `i` holds `2i + 1` nodes at Brownian
//! values `j·δ`, `j ∈ {-i, …, i}`, addressed by the integer offset `j`.
//!
//! The weights `H_i = ΔW_i / h` used to extract the `Z` component satisfy
//! `h·E[H_i²] = 1` and `max|H_i| = sqrt(3/h)`.

use thiserror::Error;

/// Probability of the `+δ` branch.
pub const P_UP: f64 = 1.0 / 6.0;
/// Probability of the flat branch.
pub const P_MID: f64 = 2.0 / 3.0;
/// Probability of the `-δ` branch.
pub const P_DOWN: f64 = 1.0 / 6.0;

#[derive(Debug, Error, PartialEq)]
pub enum LatticeError {
    #[error("horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),
    #[error("step count must be at least 1")]
    ZeroSteps,
}

/// Uniform-grid trinomial approximation of the Brownian motion on `[0, T]`.
#[derive(Debug, Clone)]
pub struct Lattice {
    horizon: f64,
    steps: usize,
    step_size: f64,
    increment: f64,
}

impl Lattice {
    pub fn build(horizon: f64, steps: usize) -> Result<Self, LatticeError> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(LatticeError::NonPositiveHorizon(horizon));
        }
        if steps == 0 {
            return Err(LatticeError::ZeroSteps);
        }
        let step_size = horizon / steps as f64;
        Ok(Self {
            horizon,
            steps,
            step_size,
            increment: (3.0 * step_size).sqrt(),
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Time step `h = T / n`.
    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    /// Spatial node spacing `δ = sqrt(3h)`.
    pub fn increment(&self) -> f64 {
        self.increment
    }

    /// Branch probabilities `(up, mid, down)`.
    pub fn probabilities(&self) -> (f64, f64, f64) {
        (P_UP, P_MID, P_DOWN)
    }

    /// Brownian value at integer offset `j`, i.e. `j·δ`.
    pub fn node_value(&self, offset: i64) -> f64 {
        offset as f64 * self.increment
    }

    /// `max|H_i| = sqrt(3/h)` for the weights `H_i = ΔW_i / h`.
    pub fn max_abs_h(&self) -> f64 {
        (3.0 / self.step_size).sqrt()
    }

    /// Terminal data evaluated at the level-`n` nodes.
    pub fn terminal_level(&self, terminal: impl Fn(f64) -> f64) -> LevelValues {
        LevelValues::from_fn(self.steps, |j| terminal(self.node_value(j)))
    }

    /// One-step conditional expectation, mapping values at level `i + 1` to
    /// level `i`: `out[j] = (1/6) next[j+1] + (2/3) next[j] + (1/6) next[j-1]`.
    pub fn conditional_expectation(&self, next: &LevelValues) -> LevelValues {
        assert!(next.level >= 1, "next level must be at least 1");
        LevelValues::from_fn(next.level - 1, |j| {
            P_UP * next.get(j + 1) + P_MID * next.get(j) + P_DOWN * next.get(j - 1)
        })
    }

    /// `Z`-extraction operator `out[j] = E_j[next · ΔW] / h`, which reduces to
    /// `(next[j+1] - next[j-1]) · δ / (6h)` under the three-outcome measure.
    pub fn z_expectation(&self, next: &LevelValues) -> LevelValues {
        assert!(next.level >= 1, "next level must be at least 1");
        let factor = self.increment / (6.0 * self.step_size);
        LevelValues::from_fn(next.level - 1, |j| (next.get(j + 1) - next.get(j - 1)) * factor)
    }
}

/// Dense vector of node values at one lattice level, indexed by the signed
/// node offset `j ∈ {-i, …, i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelValues {
    level: usize,
    values: Vec<f64>,
}

impl LevelValues {
    pub fn from_fn(level: usize, f: impl Fn(i64) -> f64) -> Self {
        let i = level as i64;
        Self {
            level,
            values: (-i..=i).map(f).collect(),
        }
    }

    pub fn constant(level: usize, value: f64) -> Self {
        Self {
            level,
            values: vec![value; 2 * level + 1],
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Node count `2·level + 1`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Value at signed offset `j`; panics when `|j| > level`.
    pub fn get(&self, offset: i64) -> f64 {
        self.values[(offset + self.level as i64) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn offsets(&self) -> impl Iterator<Item = i64> {
        let i = self.level as i64;
        -i..=i
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Largest finite `|value|` at this level (0 when none are finite).
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}
