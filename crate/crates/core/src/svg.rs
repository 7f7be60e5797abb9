//! SVG plot of agent paths around the obstacle.

use std::fmt::Write;

use crate::record::TrajectoryTable;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, thiserror::Error)]
#[error("cannot plot: {0}")]
pub struct PlotError(pub String);

/// Renders paths, the unit obstacle and the `r_bar + 1` clearance circle.
/// Output depends only on the table and `r_bar`.
pub fn render(table: &TrajectoryTable, r_bar: f64) -> Result<String, PlotError> {
    if table.rows.is_empty() {
        return Err(PlotError("trajectory has no rows".into()));
    }
    let paths: Vec<Vec<(f64, f64)>> = (0..table.agent_ids.len()).map(|k| table.path(k)).collect();
    let guard = r_bar + 1.0;
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (-guard, guard, -guard, guard);
    for &(x, y) in paths.iter().flatten() {
        if x.is_finite() && y.is_finite() {
            lo_x = lo_x.min(x);
            hi_x = hi_x.max(x);
            lo_y = lo_y.min(y);
            hi_y = hi_y.max(y);
        }
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let cx = 0.5 * (lo_x + hi_x);
    let cy = 0.5 * (lo_y + hi_y);
    let px = |x: f64| SIZE / 2.0 + (x - cx) * scale;
    let py = |y: f64| SIZE / 2.0 - (y - cy) * scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="#bbbbbb" stroke="black"/>"##,
        px(0.0),
        py(0.0),
        scale
    );
    let _ = writeln!(
        s,
        r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="gray" stroke-dasharray="6,4"/>"#,
        px(0.0),
        py(0.0),
        guard * scale
    );
    for (k, path) in paths.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = path
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline id="agent-{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            table.agent_ids[k],
            pts.join(" ")
        );
        if let (Some(&(x0, y0)), Some(&(x1, y1))) = (path.first(), path.last()) {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="5" fill="{color}"/>"#,
                px(x0),
                py(y0)
            );
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="10" height="10" fill="{color}"/>"#,
                px(x1) - 5.0,
                py(y1) - 5.0
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TrajectoryTable {
        let mut r0 = vec![0.0; 26];
        let mut r1 = vec![0.0; 26];
        r0[2] = 3.0;
        r1[2] = 4.0;
        r1[3] = 1.0;
        r0[13] = -3.0;
        r1[13] = -4.0;
        TrajectoryTable {
            agent_ids: vec![1, 2],
            rows: vec![r0, r1],
            abort_note: None,
        }
    }

    #[test]
    fn has_one_polyline_per_agent() {
        let svg = render(&sample(), 1.0).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"id="agent-2""#));
        assert_eq!(svg, render(&sample(), 1.0).unwrap());
    }

    #[test]
    fn empty_table_is_an_error() {
        let t = TrajectoryTable {
            agent_ids: vec![1],
            rows: vec![],
            abort_note: None,
        };
        assert!(render(&t, 1.0).is_err());
    }
}
