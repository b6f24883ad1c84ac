//! Command-line front end.
//!
//! Subcommands: `converge`, `sweep`, `vn-region`, `vn-constants`, `check`.
//! Options come from an optional `key = value` config file (`--config
//! path`) overridden by `--key value` flags. Exit codes: 0 success, 1
//! configuration error, 2 numerical failure.

mod config;
mod csv;
mod svg;

use std::path::{Path, PathBuf};

use crate::driver::{Driver, DriverError};
use crate::experiments::{
    convergence_study, stability_sweep, vn_region_table, ExperimentError, GridRange, SweepFamily,
    SweepProtocol, Terminal,
};
use crate::scheme::Theta;
use crate::stability::{
    critical_constants, explicit_region, implicit_region, sufficient_multidim, sufficient_unidim,
    vn_stable_explicit, vn_stable_implicit, LinearVnInputs, StabilityError, StabilityInputs,
    VnRegion,
};

pub use config::Settings;

enum CliError {
    Config(String),
    Numerical(String),
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<DriverError> for CliError {
    fn from(e: DriverError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        match e {
            StabilityError::InvalidInput(_) => CliError::Config(e.to_string()),
            StabilityError::RootBracketFailure(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Scheme(inner) => CliError::Numerical(inner.to_string()),
            ExperimentError::Stability(inner) => inner.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io error: {e}"))
    }
}

const USAGE: &str = "\
usage: bsde-stab <subcommand> [--config file] [--key value ...]

subcommands:
  converge      error table against the closed-form benchmark
                keys: alpha, b, t, theta, n_list, out
  sweep         heatmap of |Y0| ^ cap over a parameter/timestep grid
                keys: family (a_with_fixed_bz|bz|abs_z|atan_z), b, alpha,
                      theta, n, fixed_t, x_lo, x_hi, x_count,
                      h_lo, h_hi, h_count, cap, out, plot
  vn-region     Von Neumann verdict matrix plus analytic boundary curves
                keys: theta, b (comma vector), a_lo, a_hi, a_count,
                      h_lo, h_hi, h_count, out, plot
  vn-constants  print the critical constants p_tilde and u_tilde
  check         stability verdict report for one configuration
                keys: theta, driver (linear|abs_z|atan_z), a, b, h

Config files hold one `key = value` per line with `#` comments; flags
override file values. The BSDE_STAB_THREADS environment variable caps sweep
parallelism (0 = auto).";

/// Entry point used by the binary; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(()) => 0,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            2
        }
    }
}

fn dispatch(args: &[String]) -> Result<(), CliError> {
    let (subcommand, pairs) = config::parse_args(args)?;
    let Some(subcommand) = subcommand else {
        if pairs.iter().any(|(k, _)| k == "help") {
            println!("{USAGE}");
            return Ok(());
        }
        return Err(CliError::Config(format!("missing subcommand\n{USAGE}")));
    };

    let mut settings = Settings::default();
    for (key, value) in &pairs {
        if key == "config" {
            settings.load_file(value)?;
        }
    }
    for (key, value) in &pairs {
        if key != "config" {
            settings.set(key, value);
        }
    }

    match subcommand.as_str() {
        "converge" => cmd_converge(&settings),
        "sweep" => cmd_sweep(&settings),
        "vn-region" => cmd_vn_region(&settings),
        "vn-constants" => cmd_vn_constants(&settings),
        "check" => cmd_check(&settings),
        "help" | "--help" => {
            println!("{USAGE}");
            Ok(())
        }
        other => Err(CliError::Config(format!("unknown subcommand `{other}`\n{USAGE}"))),
    }
}

fn cmd_converge(settings: &Settings) -> Result<(), CliError> {
    settings.check_known_keys(&["alpha", "b", "t", "theta", "n_list", "out"])?;
    let alpha = settings.get_f64("alpha", 1.0)?;
    let b = settings.get_f64("b", 1.0)?;
    let horizon = settings.get_f64("t", 10.0)?;
    let theta = settings.get_theta("theta", Theta::Implicit)?;
    let n_list = settings.get_usize_list("n_list", &[64, 128, 256, 512])?;
    let out = PathBuf::from(settings.get_string("out", "converge.csv"));

    let study = convergence_study(alpha, b, horizon, theta, &n_list)?;
    csv::write(&out, &csv::converge_csv(&study))?;
    match study.fitted_slope {
        Some(slope) => println!("wrote {} (fitted_slope = {slope})", out.display()),
        None => println!("wrote {} (fitted_slope = NA)", out.display()),
    }
    Ok(())
}

fn parse_family(settings: &Settings) -> Result<SweepFamily, CliError> {
    let name = settings.get_string("family", "a_with_fixed_bz");
    match name.as_str() {
        "a_with_fixed_bz" => Ok(SweepFamily::LinearDrift {
            b: settings.get_f64("b", 5.0)?,
        }),
        "bz" => Ok(SweepFamily::LinearZ),
        "abs_z" => Ok(SweepFamily::AbsZ),
        "atan_z" => Ok(SweepFamily::AtanZ),
        other => Err(CliError::Config(format!(
            "unknown family `{other}`; expected a_with_fixed_bz, bz, abs_z or atan_z"
        ))),
    }
}

fn cmd_sweep(settings: &Settings) -> Result<(), CliError> {
    settings.check_known_keys(&[
        "family", "b", "alpha", "theta", "n", "fixed_t", "x_lo", "x_hi", "x_count", "h_lo",
        "h_hi", "h_count", "cap", "out", "plot",
    ])?;
    let family = parse_family(settings)?;
    let theta = settings.get_theta("theta", Theta::Implicit)?;
    let (x_lo_default, x_hi_default) = match family {
        SweepFamily::LinearDrift { .. } => (-3.0, 0.0),
        _ => (-5.0, 5.0),
    };
    let x_range = GridRange::new(
        settings.get_f64("x_lo", x_lo_default)?,
        settings.get_f64("x_hi", x_hi_default)?,
        settings.get_usize("x_count", 61)?,
    )?;
    let h_range = GridRange::new(
        settings.get_f64("h_lo", 0.0)?,
        settings.get_f64("h_hi", 2.0)?,
        settings.get_usize("h_count", 121)?,
    )?;
    let protocol = match settings.get("fixed_t") {
        Some(_) => SweepProtocol::FixedHorizon(settings.get_f64("fixed_t", 10.0)?),
        None => SweepProtocol::FixedStepCount(settings.get_usize("n", 300)?),
    };
    let terminal = Terminal::Cosine {
        alpha: settings.get_f64("alpha", 1.0)?,
    };
    let cap = settings.get_f64("cap", 10.0)?;
    let out = PathBuf::from(settings.get_string("out", "sweep.csv"));

    let result = stability_sweep(family, x_range, h_range, protocol, theta, terminal, cap)?;
    csv::write(&out, &csv::sweep_csv(&result))?;
    println!("wrote {}", out.display());
    if settings.get_bool("plot", false)? {
        let svg_path = out.with_extension("svg");
        csv::write(&svg_path, &svg::sweep_svg(&result))?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn cmd_vn_region(settings: &Settings) -> Result<(), CliError> {
    settings.check_known_keys(&[
        "theta", "b", "a_lo", "a_hi", "a_count", "h_lo", "h_hi", "h_count", "out", "plot",
    ])?;
    let theta = settings.get_theta("theta", Theta::Implicit)?;
    let b = settings.get_f64_list("b", &[5.0])?;
    let a_range = GridRange::new(
        settings.get_f64("a_lo", -3.0)?,
        settings.get_f64("a_hi", 0.0)?,
        settings.get_usize("a_count", 61)?,
    )?;
    let h_range = GridRange::new(
        settings.get_f64("h_lo", 0.0)?,
        settings.get_f64("h_hi", 2.0)?,
        settings.get_usize("h_count", 121)?,
    )?;
    let out = PathBuf::from(settings.get_string("out", "vn_region.csv"));

    let table = vn_region_table(theta, a_range, &b, h_range)?;
    csv::write(&out, &csv::vn_region_csv(&table))?;
    let boundaries = out
        .parent()
        .map(|p| p.join("boundaries.csv"))
        .unwrap_or_else(|| Path::new("boundaries.csv").to_path_buf());
    csv::write(&boundaries, &csv::boundaries_csv(&table))?;
    println!("wrote {} and {}", out.display(), boundaries.display());
    if settings.get_bool("plot", false)? {
        let svg_path = out.with_extension("svg");
        csv::write(&svg_path, &svg::vn_region_svg(&table))?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn cmd_vn_constants(settings: &Settings) -> Result<(), CliError> {
    settings.check_known_keys(&[])?;
    let (p_tilde, u_tilde) = critical_constants();
    println!("p_tilde={p_tilde}, u_tilde={u_tilde}");
    Ok(())
}

fn cmd_check(settings: &Settings) -> Result<(), CliError> {
    settings.check_known_keys(&["theta", "driver", "a", "b", "h"])?;
    let theta = settings.get_theta("theta", Theta::Implicit)?;
    let Some(_) = settings.get("h") else {
        return Err(CliError::Config("check requires --h".into()));
    };
    let h = settings.get_f64("h", 0.0)?;
    let a = settings.get_f64("a", 0.0)?;
    let b = settings.get_f64("b", 5.0)?;
    let family = settings.get_string("driver", "linear");
    let driver = match family.as_str() {
        "linear" => Driver::linear(a, b)?,
        "abs_z" => Driver::abs_z(b),
        "atan_z" => Driver::atan_z(b),
        other => Err(CliError::Config(format!(
            "unknown driver `{other}`; expected linear, abs_z or atan_z"
        )))?,
    };

    println!("driver: {}", driver.label());
    println!("theta: {theta}");
    println!("h: {h}");
    println!(
        "constants: L^Y={}, l^Y={}, L^Z={}",
        driver
            .lipschitz_y()
            .map_or("unknown".to_string(), |v| v.to_string()),
        driver.monotonicity_y(),
        driver.lipschitz_z()
    );

    let inputs = StabilityInputs::trinomial(theta, &driver, h)?;
    match sufficient_multidim(&inputs) {
        Ok(true) => println!("sufficient multidim: SATISFIED"),
        Ok(false) => println!("sufficient multidim: VIOLATED"),
        Err(_) => println!("sufficient multidim: N/A (requires l^Y > 0)"),
    }
    match sufficient_unidim(&inputs) {
        Ok(true) => println!("sufficient unidim (trinomial): SATISFIED (h <= 1/(3 L^Z^2))"),
        Ok(false) => println!("sufficient unidim (trinomial): VIOLATED (h > 1/(3 L^Z^2))"),
        Err(e) => println!("sufficient unidim (trinomial): N/A ({e})"),
    }

    if family == "linear" {
        let vn = LinearVnInputs::new(a, vec![b], h)?;
        println!("{}", vn_verdict_line(&vn, theta));
        let region = match theta {
            Theta::Implicit => implicit_region(a, &[b]).map(Some),
            Theta::PseudoExplicit => {
                if a == 0.0 && b == 0.0 {
                    Ok(None)
                } else {
                    explicit_region(a, &[b]).map(Some)
                }
            }
        }?;
        match region {
            Some(VnRegion::AStable) => println!("VN region: A-stable (all h > 0)"),
            Some(VnRegion::ForbiddenInterval { h_low, h_high }) => {
                println!("VN region: stable iff h not in ({h_low}, {h_high})")
            }
            Some(VnRegion::StablePrefix { h_bar }) => {
                println!("VN region: stable iff h <= {h_bar}")
            }
            None => println!("VN region: all h > 0 (zero driver)"),
        }
    } else {
        println!("VN: N/A (Von Neumann analysis covers linear drivers)");
    }
    Ok(())
}

/// One-line VN verdict with the decisive quantity spelled out.
fn vn_verdict_line(inputs: &LinearVnInputs, theta: Theta) -> String {
    let bn = crate::stability::b_inf_norm(inputs.b());
    let h = inputs.h();
    let a = inputs.a();
    let u = bn * bn * h;
    match theta {
        Theta::Implicit => {
            if vn_stable_implicit(inputs) {
                if bn == 0.0 {
                    "VN: STABLE (b = 0, A-stable)".to_string()
                } else if u <= 1.0 {
                    format!("VN: STABLE (|b|^2 h = {u} <= 1)")
                } else {
                    let crit = (1.0 - a * h).powi(2) - u * (1.0 / u - 1.0).exp();
                    format!("VN: STABLE (criterion = {crit} >= 0)")
                }
            } else if a == 0.0 {
                format!("VN: UNSTABLE (|b|^2 h = {u} > 1)")
            } else {
                let crit = (1.0 - a * h).powi(2) - u * (1.0 / u - 1.0).exp();
                format!("VN: UNSTABLE (criterion = {crit} < 0)")
            }
        }
        Theta::PseudoExplicit => {
            let one_ah = 1.0 + a * h;
            if vn_stable_explicit(inputs) {
                if bn == 0.0 || u <= one_ah * one_ah {
                    format!("VN: STABLE (h within the ODE limit, (1+ah)^2 = {})", one_ah * one_ah)
                } else {
                    let crit = 1.0 - u * (one_ah * one_ah / u - 1.0).exp();
                    format!("VN: STABLE (criterion = {crit} >= 0)")
                }
            } else if bn == 0.0 || u <= one_ah * one_ah {
                format!("VN: UNSTABLE (h > -2/a = {})", -2.0 / a)
            } else {
                let crit = 1.0 - u * (one_ah * one_ah / u - 1.0).exp();
                format!("VN: UNSTABLE (criterion = {crit} < 0)")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vn_verdict_matches_reference_line() {
        let vn = LinearVnInputs::new(0.0, vec![5.0], 0.05).unwrap();
        assert_eq!(
            vn_verdict_line(&vn, Theta::Implicit),
            "VN: UNSTABLE (|b|^2 h = 1.25 > 1)"
        );
    }

    #[test]
    fn unknown_subcommand_is_config_error() {
        let args = vec!["frobnicate".to_string()];
        assert!(matches!(dispatch(&args), Err(CliError::Config(_))));
    }

    #[test]
    fn check_requires_h() {
        let args: Vec<String> = ["check", "--theta", "1"].iter().map(|s| s.to_string()).collect();
        assert!(matches!(dispatch(&args), Err(CliError::Config(_))));
    }
}
