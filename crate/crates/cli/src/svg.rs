use std::fmt::Write;

use fermi_scope::numerical::{LevelComparison, Polyline};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 80.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

struct Frame {
    x: (f64, f64),
    p: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (SIZE - 2.0 * MARGIN)
    }

    fn py(&self, p: f64) -> f64 {
        SIZE - MARGIN - (p - self.p.0) / (self.p.1 - self.p.0) * (SIZE - 2.0 * MARGIN)
    }
}

fn bounds<'a>(lines: impl Iterator<Item = &'a Polyline>, fallback: Frame) -> Frame {
    let (mut x0, mut x1, mut p0, mut p1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for [x, p] in lines.flat_map(|l| l.points.iter().copied()) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        p0 = p0.min(p);
        p1 = p1.max(p);
    }
    if !(x1 > x0 && p1 > p0) {
        return fallback;
    }
    let pad = |lo: f64, hi: f64| {
        let d = 0.1 * (hi - lo);
        (lo - d, hi + d)
    };
    Frame {
        x: pad(x0, x1),
        p: pad(p0, p1),
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn path(frame: &Frame, line: &Polyline) -> String {
    let mut d = String::new();
    for (k, [x, p]) in line.points.iter().enumerate() {
        let cmd = if k == 0 { 'M' } else { 'L' };
        write!(d, "{cmd}{:.2},{:.2} ", frame.px(*x), frame.py(*p)).unwrap();
    }
    if line.closed {
        d.push('Z');
    }
    d.trim_end().to_string()
}

/// Fermi contour solid black, Wigner levels dashed and coloured, with a legend.
pub fn comparison_svg(
    fermi: &[Polyline],
    levels: &[&LevelComparison],
    x_range: (f64, f64),
    p_range: (f64, f64),
) -> String {
    let all = fermi.iter().chain(levels.iter().flat_map(|l| l.contours.iter()));
    let frame = bounds(all, Frame { x: x_range, p: p_range });
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="800" height="800" fill="white"/>"#).unwrap();
    writeln!(s, r#"<defs><clipPath id="plot"><rect x="{m}" y="{m}" width="{w}" height="{w}"/></clipPath></defs>"#, m = MARGIN, w = SIZE - 2.0 * MARGIN).unwrap();

    // axes
    let (left, right, top, bottom) = (MARGIN, SIZE - MARGIN, MARGIN, SIZE - MARGIN);
    writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        right - left,
        bottom - top
    )
    .unwrap();
    for t in ticks(frame.x.0, frame.x.1) {
        let x = frame.px(t);
        writeln!(s, r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{}" stroke="black"/>"#, bottom + 6.0).unwrap();
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
            bottom + 22.0,
            label(t)
        )
        .unwrap();
    }
    for t in ticks(frame.p.0, frame.p.1) {
        let y = frame.py(t);
        writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/>"#, left - 6.0).unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="end">{}</text>"#,
            left - 10.0,
            y + 5.0,
            label(t)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="400" y="{}" font-family="sans-serif" font-size="16" text-anchor="middle">x</text>"#,
        SIZE - 25.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="25" y="400" font-family="sans-serif" font-size="16" text-anchor="middle" transform="rotate(-90 25 400)">p</text>"#
    )
    .unwrap();

    writeln!(s, r#"<g clip-path="url(#plot)" fill="none">"#).unwrap();
    for (k, level) in levels.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        for line in &level.contours {
            writeln!(
                s,
                r#"<path d="{}" stroke="{colour}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
                path(&frame, line)
            )
            .unwrap();
        }
    }
    for line in fermi {
        writeln!(s, r#"<path d="{}" stroke="black" stroke-width="2.5"/>"#, path(&frame, line)).unwrap();
    }
    writeln!(s, "</g>").unwrap();

    // legend
    let rows = 1 + levels.len();
    writeln!(
        s,
        r#"<rect x="{}" y="{}" width="210" height="{}" fill="white" fill-opacity="0.85" stroke="gray"/>"#,
        right - 220.0,
        top + 10.0,
        10.0 + 22.0 * rows as f64
    )
    .unwrap();
    let entry = |s: &mut String, row: usize, stroke: &str, dash: &str, text: &str| {
        let y = top + 30.0 + 22.0 * row as f64;
        writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{stroke}" stroke-width="2"{dash}/>"#,
            right - 210.0,
            right - 170.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">{text}</text>"#,
            right - 160.0,
            y + 5.0
        )
        .unwrap();
    };
    entry(&mut s, 0, "black", "", "Fermi g = 0");
    for (k, level) in levels.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        entry(&mut s, k + 1, colour, r#" stroke-dasharray="6 4""#, &format!("Wigner {:.4} max", level.fraction));
    }
    s.push_str("</svg>\n");
    s
}

fn label(t: f64) -> String {
    let r = (t * 1e6).round() / 1e6;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}
