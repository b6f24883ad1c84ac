//! CSV emission. Numbers are written with Rust's shortest round-trip
//! float formatting, so identical inputs produce byte-identical files.

use std::io;
use std::path::Path;

use crate::experiments::{ConvergenceStudy, SweepResult, VnRegionTable};

fn fmt(x: f64) -> String {
    format!("{x}")
}

/// `n,h,y0,closed_form,abs_error` rows followed by a `# fitted_slope`
/// comment line.
pub fn converge_csv(study: &ConvergenceStudy) -> String {
    let mut out = String::from("n,h,y0,closed_form,abs_error\n");
    for row in &study.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n,
            fmt(row.h),
            fmt(row.y0),
            fmt(row.closed_form),
            fmt(row.abs_error)
        ));
    }
    match study.fitted_slope {
        Some(slope) => out.push_str(&format!("# fitted_slope = {}\n", fmt(slope))),
        None => out.push_str("# fitted_slope = NA\n"),
    }
    out
}

/// Header `<param>\h,<h values...>`, one row per parameter value holding the
/// capped `|Y_0|` entries.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    out.push_str(&result.param_name);
    out.push_str("\\h");
    for h in &result.h_values {
        out.push(',');
        out.push_str(&fmt(*h));
    }
    out.push('\n');
    for (ix, x) in result.x_values.iter().enumerate() {
        out.push_str(&fmt(*x));
        for v in &result.matrix[ix] {
            out.push(',');
            out.push_str(&fmt(*v));
        }
        out.push('\n');
    }
    out
}

/// Same matrix shape as [`sweep_csv`] with 0/1 stability verdicts.
pub fn vn_region_csv(table: &VnRegionTable) -> String {
    let mut out = String::from("a\\h");
    for h in &table.h_values {
        out.push(',');
        out.push_str(&fmt(*h));
    }
    out.push('\n');
    for (ia, a) in table.a_values.iter().enumerate() {
        out.push_str(&fmt(*a));
        for &stable in &table.verdicts[ia] {
            out.push(',');
            out.push(if stable { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Boundary curves and the tangency marker as `curve,x,y` rows.
pub fn boundaries_csv(table: &VnRegionTable) -> String {
    let mut out = String::from("curve,x,y\n");
    for curve in &table.boundaries {
        for (x, y) in &curve.points {
            out.push_str(&format!("{},{},{}\n", curve.name, fmt(*x), fmt(*y)));
        }
    }
    if let Some((x, y)) = table.point_a {
        out.push_str(&format!("point_A,{},{}\n", fmt(x), fmt(y)));
    }
    out
}

pub fn write(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{convergence_study, GridRange, SweepFamily, SweepProtocol, Terminal};
    use crate::scheme::Theta;

    #[test]
    fn converge_csv_shape() {
        let s = convergence_study(1.0, 1.0, 1.0, Theta::Implicit, &[4, 8]).unwrap();
        let csv = converge_csv(&s);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,h,y0,closed_form,abs_error");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("# fitted_slope = "));
        assert!(lines[1].starts_with("4,0.25,"));
    }

    #[test]
    fn sweep_csv_is_deterministic() {
        let run = || {
            let r = crate::experiments::stability_sweep(
                SweepFamily::LinearZ,
                GridRange::new(-1.0, 1.0, 3).unwrap(),
                GridRange::new(0.0, 1.0, 4).unwrap(),
                SweepProtocol::FixedStepCount(12),
                Theta::Implicit,
                Terminal::Cosine { alpha: 1.0 },
                10.0,
            )
            .unwrap();
            sweep_csv(&r)
        };
        let a = run();
        let b = run();
        assert_eq!(a, b);
        assert!(a.starts_with("b\\h,0.25,0.5,0.75,1\n"));
        assert_eq!(a.lines().count(), 4);
    }
}
