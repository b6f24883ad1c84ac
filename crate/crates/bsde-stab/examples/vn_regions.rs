//! Von Neumann stability regions for the linear driver f = a y + b z.
//!
//! Prints the critical constants, then walks the drift axis and reports the
//! region shape for both schemes: the implicit scheme switches from a
//! forbidden timestep interval to A-stability once -a/|b|^2 reaches p_tilde,
//! while the pseudo-explicit scheme always has a bounded stable prefix.
//!
//! Run with: cargo run --release --example vn_regions

use bsde_stab::{critical_constants, explicit_region, implicit_region, VnRegion};

fn describe(region: &VnRegion) -> String {
    match region {
        VnRegion::AStable => "A-stable (every h)".to_string(),
        VnRegion::ForbiddenInterval { h_low, h_high } => {
            format!("stable iff h not in ({h_low:.5}, {h_high:.5})")
        }
        VnRegion::StablePrefix { h_bar } => format!("stable iff h <= {h_bar:.5}"),
    }
}

fn main() {
    let (p_tilde, u_tilde) = critical_constants();
    println!("critical constants: p_tilde = {p_tilde:.6}, u_tilde = {u_tilde:.5}");

    let b = 5.0;
    println!();
    println!("b = {b}: A-stability of the implicit scheme needs a <= {:.4}", -p_tilde * b * b);
    println!("tangency point: (a, h) = ({:.4}, {:.5})", -p_tilde * b * b, u_tilde / (b * b));
    println!();
    println!("{:>6} | {:<42} | {}", "a", "implicit", "pseudo-explicit");
    for a in [0.0, -0.5, -1.0, -2.0, -2.5, -2.6, -3.0, -10.0] {
        let imp = implicit_region(a, &[b]).unwrap();
        let exp = explicit_region(a, &[b]).unwrap();
        println!("{a:>6} | {:<42} | {}", describe(&imp), describe(&exp));
    }

    // The effective gradient norm in d > 1 is |b|_inf, not the Euclidean
    // norm: only same-sign coordinates reinforce each other.
    println!();
    for b in [vec![3.0, 4.0], vec![3.0, -4.0]] {
        println!(
            "b = {b:?}: |b|_inf = {}, implicit region: {}",
            bsde_stab::b_inf_norm(&b),
            describe(&implicit_region(0.0, &b).unwrap())
        );
    }
}
