//! Minimal SVG writers: scatter panels of cases and center clouds, and
//! histograms of Monte Carlo replicates. Output is a pure function of the
//! inputs; coordinates are printed with fixed precision.

use std::fmt::Write as _;

use crate::geo::PlanePoint;
use crate::pattern::Landmark;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkerShape {
    Plus,
    Cross,
}

pub struct Cloud<'a> {
    pub label: &'a str,
    pub points: &'a [PlanePoint],
    pub color: &'a str,
}

pub struct Marker<'a> {
    pub label: &'a str,
    pub point: PlanePoint,
    pub shape: MarkerShape,
    pub color: &'a str,
}

pub struct Panel<'a> {
    pub title: String,
    pub cases: &'a [PlanePoint],
    pub clouds: Vec<Cloud<'a>>,
    pub markers: Vec<Marker<'a>>,
    pub landmarks: &'a [Landmark],
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Frame {
    /// Square frame around the clouds, markers and landmarks (the region of
    /// detail); cases outside it are clipped.
    fn fit(panel: &Panel<'_>) -> Frame {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for c in &panel.clouds {
            xs.extend(c.points.iter().map(|p| p.easting));
            ys.extend(c.points.iter().map(|p| p.northing));
        }
        for m in &panel.markers {
            xs.push(m.point.easting);
            ys.push(m.point.northing);
        }
        for l in panel.landmarks {
            xs.push(l.location.easting);
            ys.push(l.location.northing);
        }
        if xs.is_empty() {
            xs.extend(panel.cases.iter().map(|p| p.easting));
            ys.extend(panel.cases.iter().map(|p| p.northing));
        }
        let (xmin, xmax) = bounds(&xs);
        let (ymin, ymax) = bounds(&ys);
        let span = (xmax - xmin).max(ymax - ymin).max(1.0) * 1.15;
        let cx = 0.5 * (xmin + xmax);
        let cy = 0.5 * (ymin + ymax);
        Frame {
            x0: cx - 0.5 * span,
            y0: cy - 0.5 * span,
            scale: (WIDTH - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, p: PlanePoint) -> (f64, f64) {
        (
            MARGIN + (p.easting - self.x0) * self.scale,
            HEIGHT - MARGIN - (p.northing - self.y0) * self.scale,
        )
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

pub fn scatter_panel(panel: &Panel<'_>) -> String {
    let frame = Frame::fit(panel);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{w}"/></clipPath></defs>"#,
        w = WIDTH - 2.0 * MARGIN
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{w}" fill="none" stroke="#999"/>"##,
        w = WIDTH - 2.0 * MARGIN
    );
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="24" font-size="13">{}</text>"#, escape(&panel.title));
    let _ = writeln!(s, r#"<g clip-path="url(#plot)">"#);

    let _ = writeln!(s, r#"<g id="cases" fill="black">"#);
    for p in panel.cases {
        let (x, y) = frame.map(*p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2"/>"#);
    }
    s.push_str("</g>\n");

    for c in &panel.clouds {
        let _ = writeln!(
            s,
            r#"<g id="cloud-{}" fill="none" stroke="{}" stroke-width="0.6">"#,
            escape(c.label),
            c.color
        );
        for p in c.points {
            let (x, y) = frame.map(*p);
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#);
        }
        s.push_str("</g>\n");
    }

    for l in panel.landmarks {
        let (x, y) = frame.map(l.location);
        let _ = writeln!(
            s,
            r#"<path d="M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2} Z" fill="none" stroke="red" stroke-width="1.5"/>"#,
            x,
            y - 6.0,
            x - 5.5,
            y + 4.0,
            x + 5.5,
            y + 4.0
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" fill="red">{}</text>"#, x + 7.0, y + 4.0, escape(&l.name));
    }

    for m in &panel.markers {
        let (x, y) = frame.map(m.point);
        let d = match m.shape {
            MarkerShape::Plus => format!("M{:.2},{y:.2} H{:.2} M{x:.2},{:.2} V{:.2}", x - 7.0, x + 7.0, y - 7.0, y + 7.0),
            MarkerShape::Cross => format!(
                "M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}",
                x - 5.0,
                y - 5.0,
                x + 5.0,
                y + 5.0,
                x - 5.0,
                y + 5.0,
                x + 5.0,
                y - 5.0
            ),
        };
        let _ = writeln!(
            s,
            r#"<path d="{d}" stroke="{}" stroke-width="2.5"><title>{}</title></path>"#,
            m.color,
            escape(m.label)
        );
    }
    s.push_str("</g>\n");

    let legend: Vec<String> = panel
        .clouds
        .iter()
        .map(|c| format!(r#"<tspan fill="{}">o {}</tspan>"#, c.color, escape(c.label)))
        .chain(
            panel
                .markers
                .iter()
                .map(|m| format!(r#"<tspan fill="{}"> {} {}</tspan>"#, m.color, if m.shape == MarkerShape::Plus { "+" } else { "x" }, escape(m.label))),
        )
        .collect();
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{:.0}">{}</text>"#, HEIGHT - 24.0, legend.join(" "));
    let _ = writeln!(
        s,
        r##"<text x="{:.0}" y="{:.0}" text-anchor="end" fill="#666">{:.0} m across</text>"##,
        WIDTH - MARGIN,
        HEIGHT - 12.0,
        (WIDTH - 2.0 * MARGIN) / frame.scale
    );
    s.push_str("</svg>\n");
    s
}

/// Histogram of replicate statistics with a vertical marker at the
/// observed value.
pub fn histogram(title: &str, replicates: &[f64], observed: f64, bins: usize) -> String {
    let bins = bins.max(1);
    let (mut lo, mut hi) = bounds(replicates);
    lo = lo.min(observed);
    hi = hi.max(observed);
    if !lo.is_finite() || !hi.is_finite() {
        lo = observed - 1.0;
        hi = observed + 1.0;
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &r in replicates {
        let k = (((r - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT * 0.6 - 2.0 * MARGIN;
    let h = HEIGHT * 0.6;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{h}" viewBox="0 0 {WIDTH} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="24" font-size="13">{}</text>"#, escape(title));
    let bar_w = plot_w / bins as f64;
    for (k, &c) in counts.iter().enumerate() {
        let bh = c as f64 / top * plot_h;
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#8fb3d9" stroke="white" stroke-width="0.5"/>"##,
            MARGIN + k as f64 * bar_w,
            MARGIN + plot_h - bh,
            bar_w,
            bh
        );
    }
    let ox = MARGIN + (observed - lo) / (hi - lo) * plot_w;
    let _ = writeln!(
        s,
        r#"<line x1="{ox:.2}" y1="{MARGIN}" x2="{ox:.2}" y2="{:.2}" stroke="red" stroke-width="2"/>"#,
        MARGIN + plot_h
    );
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{:.2}">{:.1} m</text><text x="{:.2}" y="{:.2}" text-anchor="end">{:.1} m</text>"#,
        MARGIN + plot_h + 16.0,
        lo,
        WIDTH - MARGIN,
        MARGIN + plot_h + 16.0,
        hi
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" fill="red" text-anchor="middle">observed {:.1} m</text>"#,
        ox,
        MARGIN - 6.0,
        observed
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::Zone;

    fn pt(e: f64, n: f64) -> PlanePoint {
        PlanePoint::new(e, n, Zone::new(50, true).unwrap()).unwrap()
    }

    #[test]
    fn panel_contains_every_layer() {
        let cases = [pt(0.0, 0.0), pt(100.0, 50.0)];
        let cloud = [pt(40.0, 20.0), pt(60.0, 30.0)];
        let lms = [Landmark::new("Market & co", pt(80.0, 80.0)).unwrap()];
        let panel = Panel {
            title: "n = 50".into(),
            cases: &cases,
            clouds: vec![Cloud { label: "centroids", points: &cloud, color: "cyan" }],
            markers: vec![Marker { label: "centroid", point: pt(50.0, 25.0), shape: MarkerShape::Plus, color: "magenta" }],
            landmarks: &lms,
        };
        let svg = scatter_panel(&panel);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("r=\"2\"").count(), 2);
        assert_eq!(svg.matches("r=\"2.5\"").count(), 2);
        assert!(svg.contains("Market &amp; co"));
        assert_eq!(svg, scatter_panel(&panel));
    }

    #[test]
    fn histogram_marks_observed() {
        let svg = histogram("t", &[1.0, 2.0, 2.5, 3.0], 10.0, 5);
        assert_eq!(svg.matches("<rect x=").count(), 5);
        assert!(svg.contains("observed 10.0 m"));
        let flat = histogram("t", &[4.0, 4.0], 4.0, 3);
        assert!(flat.contains("observed 4.0 m"));
    }
}
