//! Minimal self-contained SVG rendering: rect-per-cell heatmaps with
//! polyline boundary overlays. Good enough to eyeball stability regions
//! without pulling in a plotting dependency.

use crate::experiments::{SweepResult, VnRegionTable};

const CELL: f64 = 6.0;
const MARGIN: f64 = 42.0;

fn header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Black (low) to yellow (high) ramp on `t in [0, 1]`.
fn ramp(t: f64) -> String {
    let c = (255.0 * t.clamp(0.0, 1.0)).round() as u8;
    format!("rgb({c},{c},0)")
}

fn axis_labels(
    out: &mut String,
    x_name: &str,
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
    plot_w: f64,
    plot_h: f64,
) {
    let fs = 10.0;
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"{fs}\">h={y_lo}</text>\n",
        4.0,
        MARGIN + plot_h
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"{fs}\">h={y_hi}</text>\n",
        4.0,
        MARGIN + fs
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"{fs}\">{x_name}={x_lo}</text>\n",
        MARGIN,
        MARGIN + plot_h + fs + 4.0
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"{fs}\" text-anchor=\"end\">{x_name}={x_hi}</text>\n",
        MARGIN + plot_w,
        MARGIN + plot_h + fs + 4.0
    ));
}

/// Heatmap of `|Y_0| ∧ cap`: parameter on the x axis, timestep increasing
/// upward on the y axis.
pub fn sweep_svg(result: &SweepResult) -> String {
    let nx = result.x_values.len();
    let nh = result.h_values.len();
    let plot_w = CELL * nx as f64;
    let plot_h = CELL * nh as f64;
    let mut out = header(plot_w + 2.0 * MARGIN, plot_h + 2.0 * MARGIN);
    out.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"{}\" font-size=\"11\">{} theta={} n-protocol={:?} cap={}</text>\n",
        MARGIN - 8.0,
        result.family_label,
        result.theta,
        result.protocol,
        result.cap
    ));
    for (ix, _) in result.x_values.iter().enumerate() {
        for (ih, _) in result.h_values.iter().enumerate() {
            let v = result.matrix[ix][ih] / result.cap;
            let x = MARGIN + CELL * ix as f64;
            let y = MARGIN + plot_h - CELL * (ih + 1) as f64;
            out.push_str(&format!(
                "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{}\"/>\n",
                ramp(v)
            ));
        }
    }
    axis_labels(
        &mut out,
        &result.param_name,
        result.x_values[0],
        *result.x_values.last().unwrap(),
        result.h_values[0],
        *result.h_values.last().unwrap(),
        plot_w,
        plot_h,
    );
    out.push_str("</svg>\n");
    out
}

/// Stability verdicts (black stable, yellow unstable) with the analytic
/// boundary curves drawn as red polylines.
pub fn vn_region_svg(table: &VnRegionTable) -> String {
    let na = table.a_values.len();
    let nh = table.h_values.len();
    let plot_w = CELL * na as f64;
    let plot_h = CELL * nh as f64;
    let a_lo = table.a_values[0];
    let a_hi = *table.a_values.last().unwrap();
    let h_lo = table.h_values[0];
    let h_hi = *table.h_values.last().unwrap();
    let x_of = |a: f64| MARGIN + plot_w * if a_hi > a_lo { (a - a_lo) / (a_hi - a_lo) } else { 0.5 };
    let y_of = |h: f64| MARGIN + plot_h * (1.0 - if h_hi > h_lo { (h - h_lo) / (h_hi - h_lo) } else { 0.5 });

    let mut out = header(plot_w + 2.0 * MARGIN, plot_h + 2.0 * MARGIN);
    out.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"{}\" font-size=\"11\">VN region theta={} b={:?}</text>\n",
        MARGIN - 8.0,
        table.theta,
        table.b
    ));
    for (ia, _) in table.a_values.iter().enumerate() {
        for (ih, _) in table.h_values.iter().enumerate() {
            let x = MARGIN + CELL * ia as f64;
            let y = MARGIN + plot_h - CELL * (ih + 1) as f64;
            let fill = if table.verdicts[ia][ih] { "black" } else { "yellow" };
            out.push_str(&format!(
                "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\"/>\n"
            ));
        }
    }
    for curve in &table.boundaries {
        let pts: Vec<String> = curve
            .points
            .iter()
            .filter(|(_, h)| h.is_finite() && *h <= h_hi)
            .map(|&(a, h)| format!("{:.2},{:.2}", x_of(a), y_of(h)))
            .collect();
        if pts.len() >= 2 {
            out.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"1\" points=\"{}\"/>\n",
                pts.join(" ")
            ));
        }
    }
    if let Some((px, py)) = table.point_a {
        // Marker is meaningful only when it falls inside the plotted window.
        if py <= h_hi && -px >= a_lo.min(a_hi) {
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"none\" stroke=\"red\"/>\n",
                x_of(-px),
                y_of(py)
            ));
        }
    }
    axis_labels(&mut out, "a", a_lo, a_hi, h_lo, h_hi, plot_w, plot_h);
    out.push_str("</svg>\n");
    out
}
