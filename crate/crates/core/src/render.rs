//! Deterministic SVG output.
//!
//! A [`Scene`] collects shapes in floating point. Rendering sorts them by
//! layer and then by their serialized form, and prints every coordinate
//! with nine decimals, so equal scenes give byte-identical documents no
//! matter the order in which shapes were added.

use std::fmt::Write as _;

use crate::aorta::{half_chain, Chain, Half};
use crate::error::Result;
use crate::faces::Face;
use crate::geom::{AffineMap, Point};
use crate::marking::{Fragment, MarkedPatch};
use crate::substitution::{Patch, ProtoId};

pub type Xy = (f64, f64);

#[derive(Clone, Debug, PartialEq)]
pub struct Style {
    pub fill: Option<String>,
    pub stroke: Option<String>,
    pub width: f64,
    pub opacity: f64,
}

impl Style {
    pub fn fill(color: &str) -> Style {
        Style { fill: Some(color.into()), stroke: Some("#333333".into()), width: 0.01, opacity: 1.0 }
    }

    pub fn line(color: &str, width: f64) -> Style {
        Style { fill: None, stroke: Some(color.into()), width, opacity: 1.0 }
    }

    pub fn dot(color: &str) -> Style {
        Style { fill: Some(color.into()), stroke: None, width: 0.0, opacity: 1.0 }
    }

    pub fn with_opacity(mut self, opacity: f64) -> Style {
        self.opacity = opacity;
        self
    }

    fn attrs(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, " fill=\"{}\"", self.fill.as_deref().unwrap_or("none"));
        if let Some(c) = &self.stroke {
            let _ = write!(s, " stroke=\"{c}\" stroke-width=\"{}\" stroke-linejoin=\"round\"", num(self.width));
        }
        if self.opacity < 1.0 {
            let _ = write!(s, " opacity=\"{}\"", num(self.opacity));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    Polygon(Vec<Xy>),
    Polyline(Vec<Xy>),
    Circle(Xy, f64),
    Text(Xy, f64, String),
}

/// Per-figure settings.
#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    /// `(x0, y0, x1, y1)`; fitted to the geometry when absent.
    pub viewport: Option<[f64; 4]>,
    pub pixels: f64,
    pub marking_depth: u32,
    pub origin_marker: bool,
    pub background: String,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { viewport: None, pixels: 800.0, marking_depth: 4, origin_marker: false, background: "#ffffff".into() }
    }
}

pub const PALETTE: [&str; 18] = [
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#bcf60c",
    "#fabebe", "#008080", "#e6beff", "#9a6324", "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1",
];

pub fn class_color(index: usize) -> &'static str {
    PALETTE[(index + PALETTE.len() - 1) % PALETTE.len()]
}

pub fn proto_color(p: ProtoId) -> &'static str {
    match p {
        ProtoId::Triangle => "#f2e6c9",
        ProtoId::Kite => "#9ecae1",
        ProtoId::DominoA => "#fdd0a2",
        ProtoId::DominoB => "#e6550d",
    }
}

pub const AORTA_COLOR: &str = "#b2182b";
pub const CONTINUATION_COLOR: &str = "#2166ac";

#[derive(Clone, Debug, Default)]
pub struct Scene {
    items: Vec<(u8, Shape, Style)>,
}

fn num(x: f64) -> String {
    let s = format!("{x:.9}");
    if s == "-0.000000000" {
        "0.000000000".into()
    } else {
        s
    }
}

pub fn xy(p: &Point) -> Xy {
    p.to_f64()
}

impl Scene {
    pub fn new() -> Scene {
        Scene::default()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn polygon(&mut self, layer: u8, pts: Vec<Xy>, style: Style) {
        self.items.push((layer, Shape::Polygon(pts), style));
    }

    pub fn polyline(&mut self, layer: u8, pts: Vec<Xy>, style: Style) {
        self.items.push((layer, Shape::Polyline(pts), style));
    }

    pub fn circle(&mut self, layer: u8, c: Xy, r: f64, style: Style) {
        self.items.push((layer, Shape::Circle(c, r), style));
    }

    pub fn text(&mut self, layer: u8, at: Xy, size: f64, s: &str) {
        self.items.push((layer, Shape::Text(at, size, s.into()), Style::dot("#000000")));
    }

    /// Moves every shape by `(dx, dy)` and appends it to `self`.
    pub fn merge(&mut self, other: Scene, (dx, dy): Xy) {
        let mv = |p: &Xy| (p.0 + dx, p.1 + dy);
        for (l, s, st) in other.items {
            let s = match s {
                Shape::Polygon(v) => Shape::Polygon(v.iter().map(mv).collect()),
                Shape::Polyline(v) => Shape::Polyline(v.iter().map(mv).collect()),
                Shape::Circle(c, r) => Shape::Circle(mv(&c), r),
                Shape::Text(c, z, t) => Shape::Text(mv(&c), z, t),
            };
            self.items.push((l, s, st));
        }
    }

    pub fn bounds(&self) -> Option<[f64; 4]> {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        let mut grow = |(x, y): Xy, r: f64| {
            b[0] = b[0].min(x - r);
            b[1] = b[1].min(y - r);
            b[2] = b[2].max(x + r);
            b[3] = b[3].max(y + r);
        };
        for (_, s, _) in &self.items {
            match s {
                Shape::Polygon(v) | Shape::Polyline(v) => v.iter().for_each(|p| grow(*p, 0.0)),
                Shape::Circle(c, r) => grow(*c, *r),
                Shape::Text(c, z, _) => grow(*c, *z),
            }
        }
        b[0].is_finite().then_some(b)
    }

    pub fn render(&self, spec: &RenderSpec) -> String {
        let [x0, y0, x1, y1] = spec.viewport.or_else(|| self.bounds()).unwrap_or([0.0, 0.0, 1.0, 1.0]);
        let pad = 0.03 * (x1 - x0).max(y1 - y0).max(1e-9);
        let (x0, y0, x1, y1) = (x0 - pad, y0 - pad, x1 + pad, y1 + pad);
        let (w, h) = (x1 - x0, y1 - y0);
        let scale = spec.pixels / w.max(h);
        let mut lines: Vec<(u8, String)> = Vec::new();
        // flip y so that the plane reads with y upward
        let t = |(x, y): Xy| format!("{},{}", num(x), num(-y));
        for (layer, shape, style) in &self.items {
            let body = match shape {
                Shape::Polygon(v) => format!(
                    "<polygon points=\"{}\"{}/>",
                    v.iter().map(|p| t(*p)).collect::<Vec<_>>().join(" "),
                    style.attrs()
                ),
                Shape::Polyline(v) => format!(
                    "<polyline points=\"{}\"{}/>",
                    v.iter().map(|p| t(*p)).collect::<Vec<_>>().join(" "),
                    style.attrs()
                ),
                Shape::Circle((x, y), r) => format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"{}/>",
                    num(*x),
                    num(-y),
                    num(*r),
                    style.attrs()
                ),
                Shape::Text((x, y), z, s) => format!(
                    "<text x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"sans-serif\" text-anchor=\"middle\">{}</text>",
                    num(*x),
                    num(-y),
                    num(*z),
                    escape(s)
                ),
            };
            lines.push((*layer, body));
        }
        lines.sort();
        let mut out = String::new();
        let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
            num(w * scale),
            num(h * scale),
            num(x0),
            num(-y1),
            num(w),
            num(h)
        );
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
            num(x0),
            num(-y1),
            num(w),
            num(h),
            spec.background
        );
        for (_, l) in lines {
            let _ = writeln!(out, "{l}");
        }
        if spec.origin_marker {
            let r = 0.008 * w.max(h);
            let _ = writeln!(out, "<circle cx=\"0.000000000\" cy=\"0.000000000\" r=\"{}\" fill=\"#000000\"/>", num(r));
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Float copies of the two aorta halves at a fixed depth, so that many
/// fragments can be drawn without exact arithmetic.
pub struct HalfCache {
    side: Vec<Xy>,
    hyp: Vec<Xy>,
}

impl HalfCache {
    pub fn new(depth: u32) -> Result<HalfCache> {
        let f = |h| -> Result<Vec<Xy>> { Ok(half_chain(h, depth)?.points.iter().map(xy).collect()) };
        Ok(HalfCache { side: f(Half::Side)?, hyp: f(Half::Hyp)? })
    }

    pub fn fragment(&self, f: &Fragment, forward: bool) -> Vec<Xy> {
        let base = if f.half == Half::Side { &self.side } else { &self.hyp };
        let m = affine_f64(&f.map);
        let mut v: Vec<Xy> = base.iter().map(|p| apply_f64(&m, *p)).collect();
        if !forward {
            v.reverse();
        }
        v
    }

    pub fn face(&self, face: &Face) -> Vec<Xy> {
        let mut out = Vec::new();
        for (f, fwd) in &face.boundary {
            let mut pts = self.fragment(f, *fwd);
            pts.pop();
            out.extend(pts);
        }
        out
    }
}

pub fn affine_f64(m: &AffineMap) -> [f64; 6] {
    let l = &m.linear.0;
    let (tx, ty) = xy(&m.translate);
    [l[0].to_f64(), l[1].to_f64(), l[2].to_f64(), l[3].to_f64(), tx, ty]
}

pub fn apply_f64(m: &[f64; 6], (x, y): Xy) -> Xy {
    (m[0] * x + m[1] * y + m[4], m[2] * x + m[3] * y + m[5])
}

pub fn add_patch(scene: &mut Scene, patch: &Patch) {
    for t in &patch.tiles {
        scene.polygon(0, t.polygon().iter().map(xy).collect(), Style::fill(proto_color(t.proto)));
    }
}

pub fn add_chain(scene: &mut Scene, chain: &Chain, color: &str, width: f64) {
    scene.polyline(2, chain.points.iter().map(xy).collect(), Style::line(color, width));
}

pub fn add_marking(scene: &mut Scene, marked: &MarkedPatch, cache: &HalfCache, width: f64) {
    for f in &marked.fragments {
        scene.polyline(2, cache.fragment(f, true), Style::line(AORTA_COLOR, width));
    }
}

/// Faces filled by their 1-based class index.
pub fn add_faces(scene: &mut Scene, faces: &[(Face, usize)], cache: &HalfCache, width: f64) {
    for (face, class) in faces {
        let mut st = Style::fill(class_color(*class));
        st.width = width;
        scene.polygon(1, cache.face(face), st);
    }
}

/// Lays out scenes in rows of `per_row`, each in a cell of the size of
/// the largest one, with an optional caption under each.
pub fn grid(cells: Vec<(Scene, Option<String>)>, per_row: usize) -> Scene {
    let bounds: Vec<[f64; 4]> = cells.iter().map(|(s, _)| s.bounds().unwrap_or([0.0; 4])).collect();
    let cw = bounds.iter().map(|b| b[2] - b[0]).fold(0.0, f64::max) * 1.15;
    let ch = bounds.iter().map(|b| b[3] - b[1]).fold(0.0, f64::max) * 1.3;
    let mut out = Scene::new();
    for (i, ((s, label), b)) in cells.into_iter().zip(&bounds).enumerate() {
        let (col, row) = ((i % per_row.max(1)) as f64, (i / per_row.max(1)) as f64);
        let cx = col * cw - (b[0] + b[2]) / 2.0;
        let cy = -row * ch - (b[1] + b[3]) / 2.0;
        if let Some(l) = label {
            out.text(5, (col * cw, -row * ch - ch * 0.45), ch * 0.08, &l);
        }
        out.merge(s, (cx, cy));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::pinwheel_supertile;

    #[test]
    fn order_does_not_matter() {
        let mut a = Scene::new();
        let mut b = Scene::new();
        let s1 = (0, vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], Style::fill("#ff0000"));
        let s2 = (1, vec![(0.0, 0.0), (2.0, 2.0)], Style::line("#000000", 0.1));
        a.polygon(s1.0, s1.1.clone(), s1.2.clone());
        a.polyline(s2.0, s2.1.clone(), s2.2.clone());
        b.polyline(s2.0, s2.1, s2.2);
        b.polygon(s1.0, s1.1, s1.2);
        let spec = RenderSpec::default();
        assert_eq!(a.render(&spec), b.render(&spec));
    }

    #[test]
    fn empty_scene_is_valid() {
        let s = Scene::new().render(&RenderSpec::default());
        assert!(s.starts_with("<?xml") && s.ends_with("</svg>\n"));
    }

    #[test]
    fn nine_decimals() {
        let mut s = Scene::new();
        add_patch(&mut s, &pinwheel_supertile(1));
        let doc = s.render(&RenderSpec::default());
        assert!(doc.contains("0.500000000"));
        assert_eq!(doc.matches("<polygon").count(), 5);
    }
}
