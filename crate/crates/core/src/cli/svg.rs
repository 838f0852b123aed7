use std::fmt::Write;

use super::Curve;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 50.0;

/// Minimal SVG plot: axis lines, a single polyline and min/max labels.
///
/// The root element carries `data-x-min`, `data-x-max`, `data-y-min` and
/// `data-y-max` so the plotted points can be mapped back to data values.
pub fn render_svg(curve: &Curve) -> String {
    let x_min = curve.theta.first().copied().unwrap_or(0.0);
    let x_max = curve.theta.last().copied().unwrap_or(1.0);
    let (y_lo, y_hi) = curve
        .value
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    // flat curves still need a nonzero range
    let (y_min, y_max) = if y_hi > y_lo { (y_lo, y_hi) } else { (y_lo - 0.5, y_hi + 0.5) };
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };

    let sx = |x: f64| MARGIN + (x - x_min) / x_span * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" data-x-min="{x_min:.16e}" data-x-max="{x_max:.16e}" data-y-min="{y_min:.16e}" data-y-max="{y_max:.16e}">"#
    );
    let _ = writeln!(s, r#"<title>{} eps={}</title>"#, curve.name, curve.eps);
    let (left, right, bottom, top) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<line class="axis" x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line class="axis" x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>"#);

    let points: Vec<String> = curve
        .theta
        .iter()
        .zip(&curve.value)
        .map(|(&x, &y)| format!("{:.6},{:.6}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(s, r#"<polyline fill="none" stroke="steelblue" points="{}"/>"#, points.join(" "));

    if let (Some(imin), Some(imax)) = (argmin(&curve.value), argmax(&curve.value)) {
        for (label, i) in [("min", imin), ("max", imax)] {
            let (x, y) = (curve.theta[i], curve.value[i]);
            let _ = writeln!(
                s,
                r#"<text class="{label}" x="{:.3}" y="{:.3}" font-size="12">{label} {y:.6} at theta={x:.6}</text>"#,
                sx(x),
                sy(y) - 4.0
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn argmax(v: &[f64]) -> Option<usize> {
    (0..v.len()).reduce(|best, i| if v[i] > v[best] { i } else { best })
}

fn argmin(v: &[f64]) -> Option<usize> {
    (0..v.len()).reduce(|best, i| if v[i] < v[best] { i } else { best })
}
