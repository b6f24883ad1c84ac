//! Convergence of the implicit scheme against the closed-form benchmark.
//!
//! For the driver f(y, z) = b z with terminal cos(alpha W_T) the exact
//! solution at time zero is e^{-alpha^2 T / 2} cos(alpha b T). Doubling the
//! step count four times shows the first-order error decay.
//!
//! Run with: cargo run --release --example convergence

use bsde_stab::{convergence_study, Theta};

fn main() {
    let (alpha, b, horizon) = (1.0, 1.0, 10.0);
    let n_list = [16, 32, 64, 128, 256, 512, 1024];
    let study = convergence_study(alpha, b, horizon, Theta::Implicit, &n_list).unwrap();

    println!("driver f = {b}*z, terminal cos({alpha}*x), T = {horizon}, theta = 1");
    println!("closed form Y0 = {:.10}", study.rows[0].closed_form);
    println!();
    println!("{:>6} {:>12} {:>14} {:>12} {:>8}", "n", "h", "Y0", "|error|", "order");
    for row in &study.rows {
        match row.local_order {
            Some(order) => println!(
                "{:>6} {:>12.6} {:>14.8} {:>12.3e} {:>8.3}",
                row.n, row.h, row.y0, row.abs_error, order
            ),
            None => println!(
                "{:>6} {:>12.6} {:>14.8} {:>12.3e} {:>8}",
                row.n, row.h, row.y0, row.abs_error, "-"
            ),
        }
    }
    println!();
    match study.fitted_slope {
        Some(slope) => println!("fitted log-log slope: {slope:.4} (first order is -1)"),
        None => println!("fitted log-log slope: not available"),
    }
}
