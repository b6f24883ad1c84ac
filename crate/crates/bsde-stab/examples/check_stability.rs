//! Stability verdicts for a handful of configurations, comparing what the
//! analytic criteria promise with what the scheme actually does.
//!
//! Run with: cargo run --release --example check_stability

use bsde_stab::{
    solve_backward, sufficient_unidim, vn_stable_implicit, Driver, Lattice, LinearVnInputs,
    SchemeConfig, StabilityInputs, Theta,
};

fn main() {
    let configs = [
        (0.0, 5.0, 0.03),  // below both thresholds
        (0.0, 5.0, 0.013), // inside the trinomial sufficient region h <= 1/75
        (0.0, 5.0, 0.05),  // above the VN threshold 1/25
        (-3.0, 5.0, 0.5),  // strong monotonicity rescues a large step
    ];

    println!(
        "{:>6} {:>4} {:>7} | {:>10} {:>10} | {:>12}",
        "a", "b", "h", "sufficient", "VN", "|Y0| (n=300)"
    );
    for (a, b, h) in configs {
        let driver = Driver::linear(a, b).unwrap();
        let sufficient = sufficient_unidim(&StabilityInputs::trinomial(Theta::Implicit, &driver, h).unwrap())
            .unwrap();
        let vn = vn_stable_implicit(&LinearVnInputs::new(a, vec![b], h).unwrap());

        let n = 300;
        let lattice = Lattice::build(h * n as f64, n).unwrap();
        let r = solve_backward(&lattice, &driver, &SchemeConfig::implicit(), |x| x.cos()).unwrap();
        let magnitude = if r.diverged { f64::INFINITY } else { r.y0.abs() };

        println!(
            "{a:>6} {b:>4} {h:>7} | {:>10} {:>10} | {magnitude:>12.4e}",
            if sufficient { "yes" } else { "no" },
            if vn { "stable" } else { "unstable" },
        );
    }
    println!();
    println!("sufficient = one-dimensional condition with the trinomial bound max|H| = sqrt(3/h)");
    println!("VN         = necessary-and-sufficient criterion for the linear driver");
}
