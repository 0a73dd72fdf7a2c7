//! Convex bodies `⋂ H(p)` on one cone and their essential points.
//!
//! The constraints are swept by total angle with a stack, as in half-plane
//! intersection: a constraint is dropped when the corner formed by its two
//! neighbours already satisfies it. A constraint whose line only touches a
//! corner is dropped too, so every survivor supports an edge of positive
//! length.

use serde::{Deserialize, Serialize};

use crate::cone::{ConePoint, StratumSig};
use crate::linalg::same_ray;
use crate::predicates::{angle_order, ccw_within_pi, circumcenter_point, circumcenter_vec, half_space_contains};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvexBody {
    pub comp: usize,
    /// Essential points in total-angle order; edge `k` lies on the bisector
    /// of `0` and `supports[k]`.
    pub supports: Vec<ConePoint>,
    /// `vertices[k]` is the corner between edges `k` and `k+1`.
    pub vertices: Vec<ConePoint>,
}

impl ConvexBody {
    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    /// Endpoints `(start, end)` of edge `k`, counterclockwise.
    pub fn edge(&self, k: usize) -> (&ConePoint, &ConePoint) {
        let n = self.len();
        (&self.vertices[(k + n - 1) % n], &self.vertices[k])
    }

    /// Twice the area: the sum of the fan triangles from the cone point.
    pub fn double_area(&self) -> Scalar {
        (0..self.len())
            .map(|k| {
                let (a, b) = self.edge(k);
                a.v.cross(&b.v)
            })
            .sum()
    }

    /// Largest squared distance of a corner from the cone point.
    pub fn max_vertex_norm2(&self) -> Scalar {
        self.vertices.iter().map(|v| v.v.norm2()).max().unwrap_or_default()
    }

    pub fn scaled(&self, r: &Scalar) -> ConvexBody {
        ConvexBody {
            comp: self.comp,
            supports: self.supports.iter().map(|p| p.scaled(r)).collect(),
            vertices: self.vertices.iter().map(|p| p.scaled(r)).collect(),
        }
    }

    /// Membership of `z` in the body (closed).
    pub fn contains(&self, sig: &StratumSig, z: &ConePoint) -> bool {
        z.comp == self.comp && self.supports.iter().all(|p| half_space_contains(sig, p, z))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unbounded {
    pub comp: usize,
    /// Consecutive constraint directions at least `π` apart.
    pub gap: Option<(ConePoint, ConePoint)>,
}

/// Keeps the shortest point on each ray, sorted by total angle.
fn shortest_per_ray(points: &[ConePoint]) -> Vec<ConePoint> {
    let mut pts: Vec<&ConePoint> = points.iter().collect();
    pts.sort_by(|a, b| angle_order(a, b).then_with(|| a.v.norm2().cmp(&b.v.norm2())));
    let mut out: Vec<ConePoint> = Vec::new();
    for p in pts {
        if let Some(last) = out.last() {
            if last.sector == p.sector && same_ray(&last.v, &p.v) {
                continue;
            }
        }
        out.push(p.clone());
    }
    out
}

/// `b` adds nothing between `a` and `c`.
fn redundant(sig: &StratumSig, a: &ConePoint, b: &ConePoint, c: &ConePoint) -> bool {
    if !ccw_within_pi(sig, a, c) {
        return false;
    }
    let x = circumcenter_vec(&a.v, &c.v).expect("non-parallel");
    let d = x.dot(&b.v);
    &d + &d <= b.v.norm2()
}

pub fn convex_body(sig: &StratumSig, comp: usize, points: &[ConePoint]) -> Result<ConvexBody, Unbounded> {
    let pts = shortest_per_ray(points);
    if pts.is_empty() {
        return Err(Unbounded { comp, gap: None });
    }
    let n = pts.len();
    for k in 0..n {
        let (a, b) = (&pts[k], &pts[(k + 1) % n]);
        if !ccw_within_pi(sig, a, b) {
            return Err(Unbounded {
                comp,
                gap: Some((a.clone(), b.clone())),
            });
        }
    }
    let start = (0..n)
        .min_by(|&i, &j| pts[i].v.norm2().cmp(&pts[j].v.norm2()).then(i.cmp(&j)))
        .expect("nonempty");
    let mut stack: Vec<&ConePoint> = vec![&pts[start]];
    for k in 1..=n {
        let c = &pts[(start + k) % n];
        while stack.len() >= 2 && redundant(sig, stack[stack.len() - 2], stack[stack.len() - 1], c) {
            stack.pop();
        }
        if k < n {
            stack.push(c);
        }
    }
    let supports: Vec<ConePoint> = stack.into_iter().cloned().collect();
    let m = supports.len();
    let vertices = (0..m)
        .map(|k| circumcenter_point(sig, &supports[k], &supports[(k + 1) % m]).expect("adjacent constraints"))
        .collect();
    Ok(ConvexBody {
        comp,
        supports,
        vertices,
    })
}

/// [`convex_body`] on a large set, growing the working set by norm until the
/// remaining points are too far away to touch the body.
pub fn convex_body_pruned(sig: &StratumSig, comp: usize, points: &[ConePoint]) -> Result<ConvexBody, Unbounded> {
    let mut pts: Vec<(Scalar, &ConePoint)> = points.iter().map(|p| (p.v.norm2(), p)).collect();
    pts.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let four = Scalar::from_int(4);
    let mut take = pts.len().min(64);
    loop {
        let work: Vec<ConePoint> = pts[..take].iter().map(|(_, p)| (*p).clone()).collect();
        match convex_body(sig, comp, &work) {
            Ok(body) => {
                // A point with |p| ≥ 2·max|V| has its bisector outside the body.
                let bound = &four * &body.max_vertex_norm2();
                if take == pts.len() || pts[take].0 >= bound {
                    return Ok(body);
                }
            }
            Err(e) if take == pts.len() => return Err(e),
            Err(_) => {}
        }
        take = (take * 2).min(pts.len());
    }
}

/// The essential points of a bounded body.
pub fn essential_points(body: &ConvexBody) -> Vec<ConePoint> {
    body.supports.clone()
}
