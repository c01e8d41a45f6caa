//! 800×800 SVG figures of the alcove of SU(2) (a segment) or SU(3) (a
//! triangle) with stroked hulls and decimated sample scatters.

use std::fmt::Write;

use qham_core::weyl::alcove_vertices;
use qham_core::{AlcovePoint, Hull};

pub const SIZE: f64 = 800.0;
pub const MARGIN: f64 = 60.0;
/// Upper bound on rendered sample points across all layers.
pub const MAX_POINTS: usize = 5000;

pub struct Layer<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub hull: Option<&'a Hull>,
    pub points: &'a [Vec<f64>],
}

/// Keeps every k-th point so that the layers share at most [`MAX_POINTS`],
/// in proportion to their sizes.
pub fn decimate(sizes: &[usize]) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    sizes
        .iter()
        .map(|&len| {
            if total <= MAX_POINTS || len == 0 {
                1
            } else {
                let budget = (MAX_POINTS * len / total).max(1);
                len.div_ceil(budget)
            }
        })
        .collect()
}

struct Viewport {
    lo: [f64; 2],
    scale: f64,
    offset: [f64; 2],
}

impl Viewport {
    fn fit(points: &[[f64; 2]]) -> Self {
        let lo = [0, 1].map(|k| points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min));
        let hi = [0, 1].map(|k| points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max));
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let offset = [0, 1].map(|k| MARGIN + 0.5 * ((SIZE - 2.0 * MARGIN) - (hi[k] - lo[k]) * scale));
        Self { lo, scale, offset }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let x = self.offset[0] + (p[0] - self.lo[0]) * self.scale;
        let y = SIZE - (self.offset[1] + (p[1] - self.lo[1]) * self.scale);
        (x, y)
    }
}

fn planar(v: &[f64]) -> [f64; 2] {
    [v[0], v.get(1).copied().unwrap_or(0.0)]
}

/// Renders layers over the alcove of SU(n), n ∈ {2, 3}; `None` otherwise.
pub fn render(n: usize, title: &str, layers: &[Layer]) -> Option<String> {
    if !(2..=3).contains(&n) {
        return None;
    }
    let corners: Vec<[f64; 2]> = alcove_vertices(n).iter().map(|v| planar(&v.embed())).collect();
    let view = Viewport::fit(&corners);
    // rows separate the layers of the one-dimensional picture
    let row = |i: usize| if n == 2 { 40.0 * (i as f64 + 1.0) } else { 0.0 };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="20" y="30" font-family="sans-serif" font-size="16">{}</text>"#, escape(title));
    let outline: Vec<String> = corners
        .iter()
        .map(|c| {
            let (x, y) = view.map(*c);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        outline.join(" ")
    );
    let strides = decimate(&layers.iter().map(|l| l.points.len()).collect::<Vec<_>>());
    for (i, (layer, stride)) in layers.iter().zip(&strides).enumerate() {
        let dy = row(i);
        let _ = writeln!(s, r#"<g id="{}" fill="{}">"#, escape(layer.label), layer.color);
        for p in layer.points.iter().step_by(*stride) {
            let (x, y) = view.map(planar(p));
            let _ = writeln!(s, r#"<rect x="{:.3}" y="{:.3}" width="1" height="1"/>"#, x, y - dy);
        }
        let _ = writeln!(s, "</g>");
        if let Some(h) = layer.hull {
            let _ = writeln!(s, "{}", hull_path(h, &view, dy, layer.color));
        }
        let _ = writeln!(
            s,
            r#"<text x="20" y="{:.0}" font-family="sans-serif" font-size="14" fill="{}">{}</text>"#,
            SIZE - 20.0 - 20.0 * i as f64,
            layer.color,
            escape(layer.label)
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn hull_path(h: &Hull, view: &Viewport, dy: f64, color: &str) -> String {
    let pts: Vec<(f64, f64)> = h
        .vertices()
        .iter()
        .map(|v| {
            let (x, y) = view.map(planar(v));
            (x, y - dy)
        })
        .collect();
    match pts.len() {
        1 => format!(
            r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts[0].0, pts[0].1
        ),
        _ => {
            let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
            format!(
                r#"<polygon points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                list.join(" ")
            )
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Embedded coordinates of alcove points.
pub fn embed_all(points: &[AlcovePoint]) -> Vec<Vec<f64>> {
    points.iter().map(AlcovePoint::embed).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimation_respects_the_cap() {
        for sizes in [vec![100_000, 1000], vec![10, 20], vec![5000, 1], vec![0, 7000]] {
            let strides = decimate(&sizes);
            let rendered: usize = sizes.iter().zip(&strides).map(|(n, k)| n.div_ceil(*k)).sum();
            assert!(rendered <= MAX_POINTS + sizes.len(), "{sizes:?} -> {rendered}");
            assert!(sizes.iter().zip(&strides).all(|(n, k)| *n == 0 || n.div_ceil(*k) >= 1));
        }
    }

    #[test]
    fn only_rank_two_and_three() {
        assert!(render(4, "x", &[]).is_none());
        let svg = render(3, "alcove", &[]).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains(r#"width="800""#));
        assert!(svg.contains("<polygon"));
    }
}
