//! Minimal line charts: one polyline, two axes, tick labels.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

fn label(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if (1e-2..1e4).contains(&x.abs()) {
        let s = format!("{x:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// `None` when the data are empty or contain non-finite values.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64]) -> Option<String> {
    if xs.is_empty() || xs.len() != ys.len() || xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return None;
    }
    let (x0, x1) = range(xs);
    let (y0, y1) = range(ys);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    )
    .unwrap();
    writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();
    writeln!(s, "<text x=\"{}\" y=\"18\" text-anchor=\"middle\">{}</text>", WIDTH / 2.0, escape(title)).unwrap();
    let (bx, by) = (LEFT, TOP + ph);
    writeln!(
        s,
        "<path d=\"M{bx:.2} {TOP:.2} L{bx:.2} {by:.2} L{:.2} {by:.2}\" stroke=\"black\" fill=\"none\"/>",
        LEFT + pw
    )
    .unwrap();
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (tx, ty) = (px(xv), py(yv));
        writeln!(s, "<line x1=\"{tx:.2}\" y1=\"{by:.2}\" x2=\"{tx:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", by + 5.0).unwrap();
        writeln!(s, "<text x=\"{tx:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", by + 18.0, label(xv)).unwrap();
        writeln!(s, "<line x1=\"{:.2}\" y1=\"{ty:.2}\" x2=\"{bx:.2}\" y2=\"{ty:.2}\" stroke=\"black\"/>", bx - 5.0).unwrap();
        writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>", bx - 8.0, ty + 4.0, label(yv)).unwrap();
    }
    writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", LEFT + pw / 2.0, HEIGHT - 15.0, escape(x_label)).unwrap();
    writeln!(
        s,
        "<text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">{}</text>",
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    )
    .unwrap();
    let points: Vec<String> = xs.iter().zip(ys).map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
    writeln!(s, "<polyline points=\"{}\" stroke=\"steelblue\" stroke-width=\"1.5\" fill=\"none\"/>", points.join(" ")).unwrap();
    s.push_str("</svg>\n");
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_has_axes_labels_and_polyline() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 1.0, 4.0];
        let svg = line_chart("U vs T", "T", "U", &xs, &ys).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains(">T</text>") && svg.contains(">U</text>"));
        assert_eq!(svg.matches("<text").count(), 3 + 2 * (TICKS + 1));
        assert!(line_chart("", "", "", &[0.0], &[f64::NAN]).is_none());
    }

    #[test]
    fn flat_series_still_renders() {
        assert!(line_chart("c", "x", "y", &[0.0, 1.0], &[2.0, 2.0]).is_some());
    }

    #[test]
    fn tick_labels() {
        assert_eq!(label(0.0), "0");
        assert_eq!(label(2.5), "2.5");
        assert_eq!(label(1.0), "1");
        assert_eq!(label(1.5e-5), "1.50e-5");
    }
}
