//! SVG pictures of cone points, triples, bodies and glued surfaces.
//!
//! Every sector of every component gets its own square panel with axes;
//! components are rows and sectors are columns. Output depends only on the
//! input, so repeated renders are byte-identical.

use std::fmt::Write;

use crate::body::ConvexBody;
use crate::builder::TranslationSurface;
use crate::cone::{ConePoint, MarkedPair, StratumSig};
use crate::linalg::Vec2;
use crate::predicates::circumcenter_point;
use crate::triple::TripleMatch;

const PANEL: f64 = 240.0;
const GAP: f64 = 20.0;

pub const PALETTE: [&str; 6] = ["#00a0c0", "#d02020", "#e0b000", "#40a040", "#8040c0", "#606060"];

struct Canvas {
    sig: StratumSig,
    radius: f64,
    body: String,
}

impl Canvas {
    fn new(sig: &StratumSig, radius: f64) -> Self {
        let mut c = Canvas {
            sig: sig.clone(),
            radius: if radius > 0.0 { radius } else { 1.0 },
            body: String::new(),
        };
        for (comp, sector) in sig.all_sectors() {
            let (ox, oy) = c.origin(comp, sector);
            let h = PANEL / 2.0;
            let _ = writeln!(
                c.body,
                r##"  <rect x="{:.2}" y="{:.2}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#cccccc"/>"##,
                ox - h,
                oy - h
            );
            let _ = writeln!(
                c.body,
                r##"  <path d="M {:.2} {oy:.2} H {:.2} M {ox:.2} {:.2} V {:.2}" stroke="#999999" stroke-width="0.5"/>"##,
                ox - h,
                ox + h,
                oy - h,
                oy + h
            );
            let _ = writeln!(
                c.body,
                r#"  <text x="{:.2}" y="{:.2}" font-size="11">c{comp}.{sector}</text>"#,
                ox - h + 4.0,
                oy - h + 13.0
            );
        }
        c
    }

    fn origin(&self, comp: usize, sector: u32) -> (f64, f64) {
        let col = f64::from(sector);
        let row = comp as f64;
        (
            GAP + PANEL / 2.0 + col * (PANEL + GAP),
            GAP + PANEL / 2.0 + row * (PANEL + GAP),
        )
    }

    fn px(&self, comp: usize, sector: u32, v: (f64, f64)) -> (f64, f64) {
        let (ox, oy) = self.origin(comp, sector);
        let k = (PANEL / 2.0 - 8.0) / self.radius;
        (ox + v.0 * k, oy - v.1 * k)
    }

    fn point(&mut self, p: &ConePoint, color: &str, label: Option<&str>) {
        let (x, y) = self.px(p.comp, p.sector, p.v.to_f64());
        let _ = writeln!(self.body, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
        if let Some(l) = label {
            let _ = writeln!(
                self.body,
                r#"  <text x="{:.2}" y="{:.2}" font-size="9" fill="{color}">{l}</text>"#,
                x + 4.0,
                y - 4.0
            );
        }
    }

    fn polygon(&mut self, comp: usize, sector: u32, pts: &[(f64, f64)], fill: &str, dashed: bool) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&v| {
                let (x, y) = self.px(comp, sector, v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let dash = if dashed { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"  <polygon points="{}" fill="{fill}" fill-opacity="0.3" stroke="black" stroke-width="0.8"{dash}/>"#,
            coords.join(" ")
        );
    }

    fn circle(&mut self, c: &ConePoint, r: f64, color: &str) {
        let (x, y) = self.px(c.comp, c.sector, c.v.to_f64());
        let k = (PANEL / 2.0 - 8.0) / self.radius;
        let _ = writeln!(
            self.body,
            r#"  <circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="none" stroke="{color}" stroke-dasharray="4 3"/>"#,
            r * k
        );
    }

    fn text(&mut self, comp: usize, sector: u32, at: (f64, f64), s: &str) {
        let (x, y) = self.px(comp, sector, at);
        let _ = writeln!(
            self.body,
            r#"  <text x="{x:.2}" y="{y:.2}" font-size="10" text-anchor="middle">{s}</text>"#
        );
    }

    fn finish(self) -> String {
        let cols = self.sig.orders().iter().map(|d| d + 1).max().unwrap_or(1);
        let rows = self.sig.kappa();
        let w = GAP + f64::from(cols) * (PANEL + GAP);
        let h = GAP + rows as f64 * (PANEL + GAP);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn max_norm<'a>(pts: impl IntoIterator<Item = &'a ConePoint>) -> f64 {
    pts.into_iter()
        .map(|p| {
            let (x, y) = p.v.to_f64();
            x.abs().max(y.abs())
        })
        .fold(0.0, f64::max)
}

fn mate_label(sig: &StratumSig, mate: &ConePoint) -> String {
    if sig.kappa() == 1 {
        format!("{}", mate.sector)
    } else {
        format!("{}.{}", mate.comp, mate.sector)
    }
}

/// Colored layers of marked pairs; each point is labeled with its mate's
/// sector. Points outside `[-radius, radius]²` are skipped.
pub fn render_pairs(sig: &StratumSig, layers: &[(String, Vec<MarkedPair>)], radius: f64) -> String {
    let mut c = Canvas::new(sig, radius * 1.05);
    for (color, pairs) in layers {
        for m in pairs {
            for (p, q) in [(&m.p, &m.mate), (&m.mate, &m.p)] {
                if max_norm([p]) <= radius {
                    c.point(p, color, Some(&mate_label(sig, q)));
                }
            }
        }
    }
    c.finish()
}

/// The scaled points of a triple with its three balls.
pub fn render_triple(sig: &StratumSig, t: &TripleMatch) -> String {
    let [rp, sq, tu] = t.scaled_pairs();
    let all = [&rp.p, &rp.mate, &sq.p, &sq.mate, &tu.p, &tu.mate];
    let mut c = Canvas::new(sig, max_norm(all) * 1.3);
    for (x, y) in [(&rp.p, &sq.p), (&tu.p, &rp.mate), (&sq.mate, &tu.mate)] {
        if let Ok(center) = circumcenter_point(sig, x, y) {
            let r = center.v.norm2().to_f64().sqrt();
            c.circle(&center, r, "#555555");
        }
    }
    for (k, m) in [rp, sq, tu].iter().enumerate() {
        let name = ["p", "q", "u"][k];
        c.point(&m.p, PALETTE[k], Some(name));
        c.point(&m.mate, PALETTE[k], Some(&format!("{name}°")));
    }
    c.finish()
}

type Triangle = [(f64, f64); 3];

/// Fan triangles of `b` grouped by the sector of their support.
fn fan_pieces(b: &ConvexBody) -> Vec<(u32, Triangle, usize)> {
    (0..b.len())
        .map(|k| {
            let (s, e) = b.edge(k);
            let sector = b.supports[k].sector;
            (sector, [(0.0, 0.0), s.v.to_f64(), e.v.to_f64()], k)
        })
        .collect()
}

fn draw_body(c: &mut Canvas, b: &ConvexBody, labels: Option<&dyn Fn(usize) -> String>) {
    for (sector, tri, k) in fan_pieces(b) {
        c.polygon(b.comp, sector, &tri, "#a0a0a0", false);
        if let Some(f) = labels {
            let mid = ((tri[1].0 + tri[2].0) / 2.0, (tri[1].1 + tri[2].1) / 2.0);
            c.text(b.comp, sector, (mid.0 * 0.85, mid.1 * 0.85), &f(k));
        }
    }
    for p in &b.supports {
        c.point(p, "black", None);
    }
}

pub fn render_body(sig: &StratumSig, b: &ConvexBody) -> String {
    let mut c = Canvas::new(sig, max_norm(&b.supports) * 1.2);
    draw_body(&mut c, b, None);
    c.finish()
}

/// Bodies of a glued surface; edges glued together share a numeric tick.
pub fn render_surface(s: &TranslationSurface) -> String {
    let r = s.bodies.iter().map(|b| max_norm(&b.vertices)).fold(0.0, f64::max);
    let mut c = Canvas::new(&s.stratum, r * 1.3);
    for (bi, b) in s.bodies.iter().enumerate() {
        let label = |k: usize| {
            s.identifications
                .iter()
                .position(|(x, y)| (x.body == bi && x.edge == k) || (y.body == bi && y.edge == k))
                .map(|i| i.to_string())
                .unwrap_or_default()
        };
        draw_body(&mut c, b, Some(&label));
    }
    c.finish()
}

/// Points of one vector list for quick looks at direction sets.
pub fn render_directions(dirs: &[Vec2]) -> String {
    let sig: StratumSig = "0".parse().expect("valid");
    let mut c = Canvas::new(&sig, 1.1);
    for d in dirs {
        c.point(&ConePoint::new(0, 0, d.clone()), "black", None);
    }
    c.finish()
}
