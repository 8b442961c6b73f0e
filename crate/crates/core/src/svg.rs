//! Static Gantt charts: one lane per machine per solution.

use std::fmt::Write as _;

use crate::model::{Machine, Schedule};

const WIDTH: f64 = 960.0;
const LEFT: f64 = 96.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const LANE: f64 = 26.0;
const LANE_GAP: f64 = 4.0;
const GROUP_GAP: f64 = 14.0;
const AXIS: f64 = 36.0;
const TICKS: usize = 5;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Spreads job colors around the hue circle by the golden angle.
fn job_color(job: usize) -> String {
    let hue = (job as f64 * 137.507_764) % 360.0;
    format!("hsl({hue:.1},65%,62%)")
}

/// Renders `solutions` as an SVG document titled `title`.
pub fn render_gantt(title: &str, solutions: &[Schedule]) -> String {
    let horizon = solutions
        .iter()
        .map(Schedule::max_load)
        .fold(0.0, f64::max);
    let scale = if horizon > 0.0 {
        (WIDTH - LEFT - RIGHT) / horizon
    } else {
        0.0
    };
    let group = 2.0 * LANE + LANE_GAP;
    let n = solutions.len() as f64;
    let height = TOP + n * group + (n - 1.0).max(0.0) * GROUP_GAP + AXIS;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{LEFT:.2}" y="22" font-size="14">{}</text>"#,
        escape(title)
    );

    for (k, schedule) in solutions.iter().enumerate() {
        let y0 = TOP + k as f64 * (group + GROUP_GAP);
        for m in Machine::BOTH {
            let y = y0 + m.index() as f64 * (LANE + LANE_GAP);
            let _ = writeln!(
                svg,
                r#"<text x="8" y="{:.2}">S{} {m}</text>"#,
                y + LANE * 0.65,
                k + 1
            );
            let _ = writeln!(
                svg,
                r##"<rect x="{LEFT:.2}" y="{y:.2}" width="{:.2}" height="{LANE:.2}" fill="#f2f2f2"/>"##,
                WIDTH - LEFT - RIGHT
            );
            for p in schedule.lane(m) {
                let x = LEFT + p.start * scale;
                let w = (p.end - p.start) * scale;
                let _ = writeln!(
                    svg,
                    r##"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{LANE:.2}" fill="{}" stroke="#333" stroke-width="0.5"><title>job {} [{:.6}, {:.6})</title></rect>"##,
                    job_color(p.job),
                    p.job,
                    p.start,
                    p.end
                );
                let label = p.job.to_string();
                if w > 7.0 * label.len() as f64 + 4.0 {
                    let _ = writeln!(
                        svg,
                        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
                        x + w / 2.0,
                        y + LANE * 0.65
                    );
                }
            }
        }
    }

    let axis_y = height - AXIS + 8.0;
    let _ = writeln!(
        svg,
        r##"<line x1="{LEFT:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="#333"/>"##,
        WIDTH - RIGHT
    );
    for i in 0..=TICKS {
        let t = horizon * i as f64 / TICKS as f64;
        let x = LEFT + t * scale;
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{axis_y:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/>"##,
            axis_y + 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{t:.3}</text>"#,
            axis_y + 16.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Piece;

    #[test]
    fn one_rect_per_piece_plus_lanes() {
        let mut s = Schedule::new();
        s.add_piece(Piece::new(Machine::First, 1, 0.0, 2.0)).unwrap();
        s.add_piece(Piece::new(Machine::Second, 2, 0.0, 1.0)).unwrap();
        let svg = render_gantt("a <b>", &[s.clone(), s]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt;b&gt;"));
        // 1 background, 4 lanes, 4 pieces.
        assert_eq!(svg.matches("<rect").count(), 9);
    }

    #[test]
    fn empty_input_still_renders() {
        let svg = render_gantt("empty", &[Schedule::new()]);
        assert!(svg.contains("</svg>"));
        assert!(!svg.contains("NaN"));
    }
}
