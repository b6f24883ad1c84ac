//! Property tests for the scheme invariants and the Von Neumann criteria.

mod common;

use proptest::prelude::*;

use bsde_stab::driver::Driver;
use bsde_stab::lattice::Lattice;
use bsde_stab::scheme::{solve_backward, SchemeConfig, Theta};
use bsde_stab::stability::{
    sufficient_multidim, vn_stable_explicit, vn_stable_implicit, LinearVnInputs, StabilityInputs,
};

fn y_free_driver(kind: u8, b: f64) -> Driver {
    match kind % 3 {
        0 => Driver::linear(0.0, b).unwrap(),
        1 => Driver::abs_z(b),
        _ => Driver::atan_z(b),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The trinomial sufficient condition h <= 1/(3 L_Z^2) keeps the
    /// implicit scheme inside the terminal bound for y-free drivers.
    #[test]
    fn bound_preserved_under_sufficient_condition(
        kind in 0u8..3,
        b in prop_oneof![(-5.0..-0.05f64), (0.05..5.0f64)],
        fraction in 0.05..1.0f64,
        n in 1usize..50,
        alpha in 0.1..3.0f64,
    ) {
        let driver = y_free_driver(kind, b);
        let h = fraction / (3.0 * b * b);
        let lattice = Lattice::build(h * n as f64, n).unwrap();
        let inputs = StabilityInputs::trinomial(Theta::Implicit, &driver, h).unwrap();
        prop_assert!(bsde_stab::stability::sufficient_unidim(&inputs).unwrap());
        let r = solve_backward(&lattice, &driver, &SchemeConfig::implicit(), |x| (alpha * x).cos()).unwrap();
        prop_assert!(!r.diverged);
        prop_assert!(r.y0.abs() <= 1.0 + 1e-10, "y0 = {}", r.y0);
        prop_assert!(r.max_abs_y <= 1.0 + 1e-10, "max |Y| = {}", r.max_abs_y);
    }

    /// Implicit and pseudo-explicit transitions coincide exactly when the
    /// generator does not depend on y.
    #[test]
    fn y_free_theta_variants_bitwise_equal(
        kind in 0u8..3,
        b in -5.0..5.0f64,
        n in 1usize..40,
        h in 0.01..2.0f64,
    ) {
        let driver = y_free_driver(kind, b);
        let lattice = Lattice::build(h * n as f64, n).unwrap();
        let imp = solve_backward(&lattice, &driver, &SchemeConfig::implicit(), |x| x.cos()).unwrap();
        let exp = solve_backward(&lattice, &driver, &SchemeConfig::pseudo_explicit(), |x| x.cos()).unwrap();
        prop_assert_eq!(imp.diverged, exp.diverged);
        if !imp.diverged {
            prop_assert_eq!(imp.y0.to_bits(), exp.y0.to_bits());
            prop_assert_eq!(imp.z0.to_bits(), exp.z0.to_bits());
        }
    }

    /// Deterministic terminal data and a z-free linear driver reduce the
    /// scheme to the classical Euler iterations.
    #[test]
    fn ode_reduction_formulas(
        a in -3.0..-0.01f64,
        h in 0.01..2.0f64,
        n in 1usize..80,
        xi in -2.0..2.0f64,
    ) {
        let driver = Driver::linear(a, 0.0).unwrap();
        let lattice = Lattice::build(h * n as f64, n).unwrap();
        let exp = solve_backward(&lattice, &driver, &SchemeConfig::pseudo_explicit(), |_| xi).unwrap();
        let imp = solve_backward(&lattice, &driver, &SchemeConfig::implicit(), |_| xi).unwrap();
        let h_eff = lattice.step_size();
        let expected_exp = xi * (1.0 + a * h_eff).powi(n as i32);
        let expected_imp = xi * (1.0 - a * h_eff).powi(-(n as i32));
        prop_assert!((exp.y0 - expected_exp).abs() <= 1e-12 * expected_exp.abs().max(1.0));
        prop_assert!((imp.y0 - expected_imp).abs() <= 1e-12 * expected_imp.abs().max(1.0));
    }

    /// VN verdicts depend on b only through |b|_inf: permuting coordinates
    /// or flipping the sign of every coordinate changes nothing.
    #[test]
    fn vn_verdicts_invariant_under_symmetries(
        a in -3.0..0.0f64,
        b0 in -5.0..5.0f64,
        b1 in -5.0..5.0f64,
        b2 in -5.0..5.0f64,
        h in 0.001..2.0f64,
        theta_bit in 0u64..2,
    ) {
        let theta = Theta::from_int(theta_bit).unwrap();
        let check = |b: Vec<f64>| {
            let inputs = LinearVnInputs::new(a, b, h).unwrap();
            match theta {
                Theta::Implicit => vn_stable_implicit(&inputs),
                Theta::PseudoExplicit => vn_stable_explicit(&inputs),
            }
        };
        let base = check(vec![b0, b1, b2]);
        prop_assert_eq!(check(vec![b2, b0, b1]), base);
        prop_assert_eq!(check(vec![b1, b2, b0]), base);
        prop_assert_eq!(check(vec![-b0, -b1, -b2]), base);
    }

    /// The sufficient condition implies the VN criterion for linear drivers.
    #[test]
    fn sufficient_condition_implies_vn_stability(
        a in -3.0..-0.001f64,
        b0 in -5.0..5.0f64,
        b1 in -5.0..5.0f64,
        h in 0.001..2.0f64,
        theta_bit in 0u64..2,
        dim in 1usize..3,
    ) {
        let theta = Theta::from_int(theta_bit).unwrap();
        let b = if dim == 1 { vec![b0] } else { vec![b0, b1] };
        let euclid = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        let inputs = StabilityInputs {
            theta,
            lipschitz_y: a.abs(),
            lipschitz_z: euclid,
            monotonicity_y: -a,
            lambda_upper: 1.0,
            lambda_lower: 1.0,
            h,
            max_abs_h: (3.0 / h).sqrt(),
        };
        if sufficient_multidim(&inputs).unwrap() {
            let vn = LinearVnInputs::new(a, b, h).unwrap();
            let stable = match theta {
                Theta::Implicit => vn_stable_implicit(&vn),
                Theta::PseudoExplicit => vn_stable_explicit(&vn),
            };
            prop_assert!(stable, "sufficient condition held but VN says unstable");
        }
    }
}
