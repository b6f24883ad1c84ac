//! Numerical stability laboratory for Euler-type schemes solving backward
//! stochastic differential equations (BSDEs).
//!
//! The crate solves the backward theta-scheme
//!
//! ```text
//! Y_i = E_i[ Y_{i+1} + h θ f(Y_i, Z_i) + h (1-θ) f(Y_{i+1}, Z_i) ],
//! Z_i = E_i[ Y_{i+1} H_i ],          θ ∈ {0, 1},
//! ```
//!
//! on a recombining trinomial lattice for the Brownian motion, and studies
//! when the scheme stays bounded by the terminal data. It provides:
//!
//! * [`driver`] — generators `f(y, z)` with declared Lipschitz/monotonicity
//!   constants (linear, `b|z|`, `atan(bz)`, custom);
//! * [`lattice`] — the trinomial tree with its conditional-expectation and
//!   `Z`-extraction operators;
//! * [`scheme`] — the backward recursion, including the implicit per-node
//!   scalar solve;
//! * [`stability`] — analytic sufficient conditions, Von Neumann criteria
//!   and stability regions for linear drivers, and a brute-force
//!   amplification-factor oracle;
//! * [`experiments`] — convergence studies, stability heatmap sweeps and
//!   Von Neumann region tables as plain data;
//! * [`cli`] — a small front end writing CSV files (and optional SVG plots).
//!
//! Each major capability has a runnable example under `examples/`; start
//! with `cargo run --example convergence`.

pub mod cli;
pub mod driver;
pub mod experiments;
pub mod lattice;
pub mod scheme;
pub mod stability;

pub use driver::Driver;
pub use experiments::{
    closed_form_y0, convergence_study, stability_sweep, vn_region_table, ConvergenceStudy,
    GridRange, SweepFamily, SweepProtocol, SweepResult, Terminal, VnRegionTable,
};
pub use lattice::{Lattice, LevelValues};
pub use scheme::{implicit_step, solve_backward, SchemeConfig, SchemeResult, Theta};
pub use stability::{
    amplification_factor, b_inf_norm, critical_constants, explicit_region, implicit_region,
    sufficient_multidim, sufficient_unidim, vn_oracle, vn_stable_explicit, vn_stable_implicit,
    LinearVnInputs, StabilityInputs, VnRegion,
};
