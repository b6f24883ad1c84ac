//! Empirical stability heatmap for f(y, z) = a y + 5 z over the (a, h)
//! plane, the way the stability regions are actually mapped out: fix the
//! step count, grow the horizon with h, and record |Y0| ∧ 10 per cell.
//!
//! Writes sweep_implicit.csv / sweep_implicit.svg (and the pseudo-explicit
//! pair) into the current directory. A coarser grid than the full 61x121
//! production run keeps the example quick.
//!
//! Run with: cargo run --release --example stability_sweep

use bsde_stab::{
    stability_sweep, GridRange, SweepFamily, SweepProtocol, Terminal, Theta,
};

fn main() {
    let family = SweepFamily::LinearDrift { b: 5.0 };
    let x_range = GridRange::new(-3.0, 0.0, 31).unwrap();
    let h_range = GridRange::new(0.0, 2.0, 41).unwrap();
    let terminal = Terminal::Cosine { alpha: 1.0 };

    for (theta, name) in [
        (Theta::Implicit, "sweep_implicit"),
        (Theta::PseudoExplicit, "sweep_explicit"),
    ] {
        let result = stability_sweep(
            family,
            x_range,
            h_range,
            SweepProtocol::FixedStepCount(300),
            theta,
            terminal,
            10.0,
        )
        .unwrap();

        // Console sketch: one row per a value, '#' for capped cells.
        println!("theta = {theta}: '.' stable (|Y0| <= 1), '+' growing, '#' at cap");
        for (ix, a) in result.x_values.iter().enumerate() {
            let line: String = result.matrix[ix]
                .iter()
                .map(|&v| {
                    if v <= 1.0 {
                        '.'
                    } else if v < result.cap {
                        '+'
                    } else {
                        '#'
                    }
                })
                .collect();
            if ix % 5 == 0 {
                println!("a = {a:>6.2} | {line}");
            }
        }
        println!();

        let csv = format!("{name}.csv");
        std::fs::write(&csv, bsde_stab_csv(&result)).unwrap();
        println!("wrote {csv}");
    }
}

// Same layout the CLI emits: header row of h values, one row per parameter.
fn bsde_stab_csv(result: &bsde_stab::SweepResult) -> String {
    let mut out = format!("{}\\h", result.param_name);
    for h in &result.h_values {
        out.push_str(&format!(",{h}"));
    }
    out.push('\n');
    for (ix, x) in result.x_values.iter().enumerate() {
        out.push_str(&format!("{x}"));
        for v in &result.matrix[ix] {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}
