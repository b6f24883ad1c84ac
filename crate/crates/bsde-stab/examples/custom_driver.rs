//! A user-supplied monotone driver without a Lipschitz-in-y bound.
//!
//! f(y, z) = -y^3 + z is monotone (l^Y = 0) but not Lipschitz in y, so the
//! pseudo-explicit scheme is ill-posed for it while the implicit scheme
//! solves each transition through the safeguarded bracketing fallback.
//!
//! Run with: cargo run --release --example custom_driver

use bsde_stab::{implicit_step, solve_backward, Driver, Lattice, SchemeConfig, Theta};

fn main() {
    let driver = Driver::custom("-y^3 + z", |y, z| -y * y * y + z, None, 1.0, 0.0).unwrap();
    let config = SchemeConfig::new(Theta::Implicit);

    // Single transition: solve y + h y^3 = rhs + h z.
    let (rhs, z, h) = (2.0, 0.0, 1.0);
    let y = implicit_step(rhs, z, &driver, h, &config).unwrap();
    println!("implicit step with rhs = {rhs}, z = {z}, h = {h}: y = {y:.12} (exact root 1)");

    // Full backward solves stay inside the terminal bound: the cubic only
    // pushes y toward zero.
    println!();
    println!("{:>6} {:>10} {:>12} {:>12}", "n", "h", "Y0", "max |Y|");
    for n in [10, 50, 200] {
        let horizon = 2.0;
        let lattice = Lattice::build(horizon, n).unwrap();
        let r = solve_backward(&lattice, &driver, &config, |x| x.cos()).unwrap();
        println!(
            "{n:>6} {:>10.5} {:>12.8} {:>12.8}",
            lattice.step_size(),
            r.y0,
            r.max_abs_y
        );
    }

    // The explicit scheme refuses the driver outright.
    let lattice = Lattice::build(2.0, 10).unwrap();
    let err = solve_backward(&lattice, &driver, &SchemeConfig::pseudo_explicit(), |x| x.cos());
    println!();
    println!("pseudo-explicit attempt: {}", err.unwrap_err());
}
