//! The transient-instability phenomenon: a convergent scheme that is wildly
//! wrong until the step count clears the stability threshold.
//!
//! With f = 5 z and T = 10 the scheme output should stay inside the
//! terminal bound |Y0| <= 1, yet for n below roughly 250 (h above 1/25)
//! the computed value explodes by orders of magnitude before settling.
//!
//! Run with: cargo run --release --example transient_instability

use bsde_stab::{closed_form_y0, solve_backward, Driver, Lattice, SchemeConfig, Theta};

fn main() {
    let (alpha, b, horizon) = (1.0, 5.0, 10.0);
    let driver = Driver::linear(0.0, b).unwrap();
    let config = SchemeConfig::new(Theta::Implicit);
    let target = closed_form_y0(alpha, b, horizon);

    println!("driver f = {b}*z, terminal cos(W_T), T = {horizon}, implicit scheme");
    println!("exact Y0 = {target:.6e}; the VN threshold sits at h = 1/{} (n = 250)", (b * b) as i64);
    println!();
    println!("{:>6} {:>10} {:>14} {:>10}", "n", "h", "|Y0|", "bounded?");
    for n in [25, 50, 100, 150, 200, 240, 260, 300, 400, 800] {
        let lattice = Lattice::build(horizon, n).unwrap();
        let r = solve_backward(&lattice, &driver, &config, |x| (alpha * x).cos()).unwrap();
        let magnitude = if r.diverged { f64::INFINITY } else { r.y0.abs() };
        println!(
            "{:>6} {:>10.5} {:>14.6e} {:>10}",
            n,
            lattice.step_size(),
            magnitude,
            if magnitude <= 1.0 { "yes" } else { "NO" }
        );
    }

    let first_good = (1..=400)
        .find(|&n| {
            let lattice = Lattice::build(horizon, n).unwrap();
            let r = solve_backward(&lattice, &driver, &config, |x| (alpha * x).cos()).unwrap();
            !r.diverged && r.y0.abs() <= 1.0 && n >= 10
        })
        .unwrap_or(0);
    println!();
    println!("first n >= 10 with |Y0| <= 1: {first_good}");
}
