//! BSDE generators `f(y, z)` together with their declared regularity
//! constants.
//!
//! A [`Driver`] carries the generator itself and three declared constants:
//! the Lipschitz constant in `y` (`L^Y`, absent for monotone-only drivers),
//! the Lipschitz constant in `z` (`L^Z`), and the one-sided monotonicity
//! constant `l^Y` in `(y - y')(f(y,z) - f(y',z)) <= -l^Y (y - y')²`. The
//! constants are declarative: the stability criteria consume them as given
//! and the library never estimates them. [`Driver::check_constants`] offers
//! a sampled consistency check for tests.
//!
//! All built-in drivers satisfy `f(0, 0) = 0`.

use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("linear driver requires a <= 0, got a = {0}")]
    PositiveDrift(f64),
    #[error("invalid driver constant: {0}")]
    InvalidConstant(String),
    #[error(
        "sampled {inequality} check failed for driver `{label}` at \
         (y={y}, y'={y_prime}, z={z}, z'={z_prime}): excess {excess:e}"
    )]
    ConstantViolation {
        label: String,
        inequality: &'static str,
        y: f64,
        y_prime: f64,
        z: f64,
        z_prime: f64,
        excess: f64,
    },
}

#[derive(Clone)]
enum Form {
    Linear { a: f64, b: f64 },
    AbsZ { b: f64 },
    AtanZ { b: f64 },
    Custom(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

/// A generator `f(y, z)` with its declared constants. Immutable and cheap to
/// clone; safe to share across threads.
#[derive(Clone)]
pub struct Driver {
    label: String,
    form: Form,
    lipschitz_y: Option<f64>,
    lipschitz_z: f64,
    monotonicity_y: f64,
}

impl fmt::Debug for Driver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Driver")
            .field("label", &self.label)
            .field("lipschitz_y", &self.lipschitz_y)
            .field("lipschitz_z", &self.lipschitz_z)
            .field("monotonicity_y", &self.monotonicity_y)
            .finish()
    }
}

impl Driver {
    /// Linear generator `f(y, z) = a·y + b·z` with `a <= 0`.
    ///
    /// Constants: `L^Y = |a|`, `l^Y = -a`, `L^Z = |b|`.
    pub fn linear(a: f64, b: f64) -> Result<Self, DriverError> {
        if !(a <= 0.0) {
            return Err(DriverError::PositiveDrift(a));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(DriverError::InvalidConstant(format!(
                "linear coefficients must be finite, got (a={a}, b={b})"
            )));
        }
        Ok(Self {
            label: format!("linear(a={a}, b={b})"),
            form: Form::Linear { a, b },
            lipschitz_y: Some(a.abs()),
            lipschitz_z: b.abs(),
            monotonicity_y: -a,
        })
    }

    /// `f(y, z) = b·|z|`. Constants: `L^Y = 0`, `l^Y = 0`, `L^Z = |b|`.
    pub fn abs_z(b: f64) -> Self {
        Self {
            label: format!("abs_z(b={b})"),
            form: Form::AbsZ { b },
            lipschitz_y: Some(0.0),
            lipschitz_z: b.abs(),
            monotonicity_y: 0.0,
        }
    }

    /// `f(y, z) = atan(b·z)`. Constants: `L^Y = 0`, `l^Y = 0`, `L^Z = |b|`.
    pub fn atan_z(b: f64) -> Self {
        Self {
            label: format!("atan_z(b={b})"),
            form: Form::AtanZ { b },
            lipschitz_y: Some(0.0),
            lipschitz_z: b.abs(),
            monotonicity_y: 0.0,
        }
    }

    /// User-supplied generator with user-supplied constants. Pass
    /// `lipschitz_y: None` for monotone drivers without a Lipschitz bound in
    /// `y` (e.g. `f(y) = -y³`); such drivers are only usable with the
    /// implicit scheme.
    pub fn custom(
        label: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        lipschitz_y: Option<f64>,
        lipschitz_z: f64,
        monotonicity_y: f64,
    ) -> Result<Self, DriverError> {
        if let Some(ly) = lipschitz_y {
            if !ly.is_finite() || ly < 0.0 {
                return Err(DriverError::InvalidConstant(format!(
                    "L^Y must be finite and nonnegative, got {ly}"
                )));
            }
            if monotonicity_y > ly {
                return Err(DriverError::InvalidConstant(format!(
                    "l^Y = {monotonicity_y} exceeds L^Y = {ly}"
                )));
            }
        }
        if !lipschitz_z.is_finite() || lipschitz_z < 0.0 {
            return Err(DriverError::InvalidConstant(format!(
                "L^Z must be finite and nonnegative, got {lipschitz_z}"
            )));
        }
        if !monotonicity_y.is_finite() || monotonicity_y < 0.0 {
            return Err(DriverError::InvalidConstant(format!(
                "l^Y must be finite and nonnegative, got {monotonicity_y}"
            )));
        }
        Ok(Self {
            label: label.into(),
            form: Form::Custom(Arc::new(f)),
            lipschitz_y,
            lipschitz_z,
            monotonicity_y,
        })
    }

    pub fn evaluate(&self, y: f64, z: f64) -> f64 {
        match &self.form {
            Form::Linear { a, b } => a * y + b * z,
            Form::AbsZ { b } => b * z.abs(),
            Form::AtanZ { b } => (b * z).atan(),
            Form::Custom(f) => f(y, z),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `L^Y`, or `None` for monotone-only drivers.
    pub fn lipschitz_y(&self) -> Option<f64> {
        self.lipschitz_y
    }

    /// `L^Z`.
    pub fn lipschitz_z(&self) -> f64 {
        self.lipschitz_z
    }

    /// `l^Y`.
    pub fn monotonicity_y(&self) -> f64 {
        self.monotonicity_y
    }

    /// `(a, b)` when the generator is the built-in linear family.
    pub fn linear_coefficients(&self) -> Option<(f64, f64)> {
        match self.form {
            Form::Linear { a, b } => Some((a, b)),
            _ => None,
        }
    }

    /// True when the declared `L^Y` is exactly zero, i.e. `f` does not
    /// depend on `y`.
    pub fn is_y_free(&self) -> bool {
        self.lipschitz_y == Some(0.0)
    }

    /// Sampled verification of the declared constants: draws `samples`
    /// quadruples `(y, y', z, z')` uniformly from `[lo, hi]⁴` and checks
    ///
    /// * `|f(y,z) - f(y',z)| <= L^Y |y - y'| + tol` (skipped when `L^Y` is absent),
    /// * `(y - y')(f(y,z) - f(y',z)) <= -l^Y (y - y')² + tol`,
    /// * `|f(y,z) - f(y,z')| <= L^Z |z - z'| + tol`.
    pub fn check_constants(
        &self,
        samples: usize,
        lo: f64,
        hi: f64,
        tol: f64,
        seed: u64,
    ) -> Result<(), DriverError> {
        let mut rng = StdRng::seed_from_u64(seed);
        let draw = |rng: &mut StdRng| rng.gen_range(lo..=hi);
        for _ in 0..samples {
            let y = draw(&mut rng);
            let y_prime = draw(&mut rng);
            let z = draw(&mut rng);
            let z_prime = draw(&mut rng);
            let violation = |inequality, excess| DriverError::ConstantViolation {
                label: self.label.clone(),
                inequality,
                y,
                y_prime,
                z,
                z_prime,
                excess,
            };

            let dy = self.evaluate(y, z) - self.evaluate(y_prime, z);
            if let Some(ly) = self.lipschitz_y {
                let excess = dy.abs() - ly * (y - y_prime).abs() - tol;
                if excess > 0.0 {
                    return Err(violation("Lipschitz-y", excess));
                }
            }
            let excess =
                (y - y_prime) * dy + self.monotonicity_y * (y - y_prime).powi(2) - tol;
            if excess > 0.0 {
                return Err(violation("monotonicity", excess));
            }
            let dz = self.evaluate(y, z) - self.evaluate(y, z_prime);
            let excess = dz.abs() - self.lipschitz_z * (z - z_prime).abs() - tol;
            if excess > 0.0 {
                return Err(violation("Lipschitz-z", excess));
            }
        }
        Ok(())
    }
}
