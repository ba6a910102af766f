//! Static SVG rendering of `Re s_k(z)` curves.

use std::fmt::Write as _;

use epn_core::spectrum::{EP2Boundary, RootClass, SpectrumSample};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn nice_ticks(lo: f64, hi: f64, want: usize) -> Vec<f64> {
    let span = (hi - lo).abs().max(f64::MIN_POSITIVE);
    let raw = span / want as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(if t.abs() < 1e-12 * span { 0.0 } else { t });
        t += step;
    }
    out
}

fn label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e5 || v.abs() < 1e-3 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Real roots are drawn solid, real parts of complex pairs dashed.
pub fn render_svg(samples: &[SpectrumSample], boundaries: &[EP2Boundary], title: &str) -> String {
    let j = samples.first().map_or(0, |s| s.roots.len());
    let zs: Vec<f64> = samples.iter().map(|s| s.z.to_f64()).collect();
    let (x0, x1) = zs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), z| (a.min(*z), b.max(*z)));
    let ys = samples.iter().flat_map(|s| s.roots.iter().map(|r| r.re.to_f64()));
    let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    if !y0.is_finite() || y0 == y1 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let pad = 0.05 * (y1 - y0);
    let f = Frame {
        x0,
        x1: if x1 > x0 { x1 } else { x0 + 1.0 },
        y0: y0 - pad,
        y1: y1 + pad,
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        r - l,
        b - t
    );
    for x in nice_ticks(f.x0, f.x1, 8) {
        let px = f.px(x);
        let _ = writeln!(svg, r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{}" stroke="black"/>"#, b + 5.0);
        let _ = writeln!(svg, r#"<text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#, b + 18.0, label(x));
    }
    for y in nice_ticks(f.y0, f.y1, 6) {
        let py = f.py(y);
        let _ = writeln!(svg, r#"<line x1="{}" y1="{py:.2}" x2="{l}" y2="{py:.2}" stroke="black"/>"#, l - 5.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, l - 8.0, py + 4.0, label(y));
    }
    if f.y0 < 0.0 && f.y1 > 0.0 {
        let py = f.py(0.0);
        let _ = writeln!(svg, r##"<line x1="{l}" y1="{py:.2}" x2="{r}" y2="{py:.2}" stroke="#999" stroke-width="0.5"/>"##);
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">z</text>"#, WIDTH / 2.0, HEIGHT - 16.0);
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">Re s</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for bd in boundaries {
        let z = bd.z.to_f64();
        if z >= f.x0 && z <= f.x1 {
            let px = f.px(z);
            let _ = writeln!(
                svg,
                r##"<line x1="{px:.2}" y1="{t}" x2="{px:.2}" y2="{b}" stroke="#888" stroke-dasharray="2,3"/>"##
            );
        }
    }
    for k in 0..j {
        let color = COLORS[k % COLORS.len()];
        let mut run: Vec<(f64, f64)> = Vec::new();
        let mut run_real = true;
        let flush = |run: &mut Vec<(f64, f64)>, real: bool, svg: &mut String| {
            if run.len() >= 2 {
                let pts: Vec<String> = run.iter().map(|(x, y)| format!("{:.2},{:.2}", f.px(*x), f.py(*y))).collect();
                let dash = if real { "" } else { r#" stroke-dasharray="5,3" stroke-opacity="0.6""# };
                let _ = writeln!(
                    svg,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                    pts.join(" ")
                );
            }
            run.clear();
        };
        for s in samples {
            let real = s.classes[k] != RootClass::ComplexPairMember;
            if real != run_real {
                let last = run.last().copied();
                flush(&mut run, run_real, &mut svg);
                run.extend(last);
                run_real = real;
            }
            run.push((s.z.to_f64(), s.roots[k].re.to_f64()));
        }
        flush(&mut run, run_real, &mut svg);
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_cover_range() {
        let t = nice_ticks(-500.0, 900.0, 8);
        assert_eq!(t.first(), Some(&-400.0));
        assert_eq!(t.last(), Some(&800.0));
        assert_eq!(label(0.25), "0.25");
        assert_eq!(label(2e6), "2.0e6");
    }
}
