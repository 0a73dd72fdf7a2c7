//! Gluing convex bodies along paired edges into a translation surface.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::body::ConvexBody;
use crate::cone::{enumerate_trans, ConePoint, MarkedPair, StratumSig};
use crate::linalg::{arg_cmp_nz, Vec2};
use crate::predicates::ccw_within_pi;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub body: usize,
    pub edge: usize,
}

/// Staples and the edge pairs they induce; `edges[k]` holds the edge of
/// `staples[k].p` followed by the edge of `staples[k].mate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub staples: Vec<MarkedPair>,
    pub edges: Vec<(EdgeRef, EdgeRef)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum Mismatch {
    #[error("essential point {0} has no mate in the universe")]
    NoMate(ConePoint),
    #[error("point {0} has conflicting mates")]
    Conflict(ConePoint),
    #[error("mate {0} is not essential")]
    MateNotEssential(ConePoint),
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum GlueError {
    #[error("missing body for component {0}")]
    MissingBody(usize),
    #[error("glued edges of staple {0} differ in length")]
    LengthMismatch(usize),
    #[error("glued edges of staple {0} are not translates")]
    NotTranslates(usize),
    #[error("vertex class {0} has angle different from 2π")]
    AngleDefect(usize),
    #[error("cone angle at component {0} is wrong")]
    ConeAngle(usize),
    #[error("Euler characteristic {0} does not match the stratum")]
    WrongStratum(i64),
    #[error("glued surface is disconnected")]
    Disconnected,
}

/// Matches every essential point with its mate from the universe.
pub fn pair_essentials(bodies: &[ConvexBody], universe: &[MarkedPair]) -> Result<Pairing, Mismatch> {
    let mut mates: HashMap<&ConePoint, &ConePoint> = HashMap::new();
    for m in universe {
        for (a, b) in [(&m.p, &m.mate), (&m.mate, &m.p)] {
            if let Some(prev) = mates.insert(a, b) {
                if prev != b {
                    return Err(Mismatch::Conflict(a.clone()));
                }
            }
        }
    }
    let mut where_: HashMap<&ConePoint, EdgeRef> = HashMap::new();
    for (bi, b) in bodies.iter().enumerate() {
        for (k, p) in b.supports.iter().enumerate() {
            where_.insert(p, EdgeRef { body: bi, edge: k });
        }
    }
    let mut out = Pairing {
        staples: Vec::new(),
        edges: Vec::new(),
    };
    for (bi, b) in bodies.iter().enumerate() {
        for (k, p) in b.supports.iter().enumerate() {
            let here = EdgeRef { body: bi, edge: k };
            let mate = *mates.get(p).ok_or_else(|| Mismatch::NoMate(p.clone()))?;
            let there = *where_
                .get(mate)
                .ok_or_else(|| Mismatch::MateNotEssential(mate.clone()))?;
            if here < there {
                out.staples.push(MarkedPair::new(p.clone(), mate.clone()));
                out.edges.push((here, there));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationSurface {
    pub stratum: StratumSig,
    /// One body per component, indexed by component.
    pub bodies: Vec<ConvexBody>,
    pub identifications: Vec<(EdgeRef, EdgeRef)>,
    pub staples: Vec<MarkedPair>,
    pub area: Scalar,
    pub applied_scale: Scalar,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Corner directions at vertex `j` of `b`: `(u_out, u_in)`, the interior
/// angle running counterclockwise from `u_out` to `u_in`.
pub fn corner(b: &ConvexBody, j: usize) -> (Vec2, Vec2) {
    let n = b.len();
    let v = &b.vertices[j].v;
    (&b.vertices[(j + 1) % n].v - v, &b.vertices[(j + n - 1) % n].v - v)
}

/// Adds angles given as nonzero vectors, each in `(0, π)`; returns whether
/// the total is exactly `2π`.
fn angles_sum_to_full_turn(steps: &[(Vec2, Vec2)]) -> bool {
    let mut acc = Vec2::ints(1, 0);
    let mut wraps = 0;
    for (from, to) in steps {
        // Rotation taking `from` to `to`, as a complex number.
        let z = Vec2::new(to.dot(from), from.cross(to));
        let next = Vec2::new(&(&acc.x * &z.x) - &(&acc.y * &z.y), &(&acc.x * &z.y) + &(&acc.y * &z.x));
        if arg_cmp_nz(&next, &acc) == std::cmp::Ordering::Less {
            wraps += 1;
        }
        acc = next;
    }
    wraps == 1 && acc.y.is_zero() && acc.x.is_positive()
}

pub fn glue(sig: &StratumSig, bodies: &[ConvexBody], pairing: &Pairing) -> Result<TranslationSurface, GlueError> {
    for i in 0..sig.kappa() {
        if bodies.get(i).map(|b| b.comp) != Some(i) {
            return Err(GlueError::MissingBody(i));
        }
    }
    for (k, (a, b)) in pairing.edges.iter().enumerate() {
        let (s1, e1) = bodies[a.body].edge(a.edge);
        let (s2, e2) = bodies[b.body].edge(b.edge);
        if (&e1.v - &s1.v).norm2() != (&e2.v - &s2.v).norm2() {
            return Err(GlueError::LengthMismatch(k));
        }
        let shift = &pairing.staples[k].p.v;
        if &s1.v - shift != e2.v || &e1.v - shift != s2.v {
            return Err(GlueError::NotTranslates(k));
        }
    }
    // Cone angle at each center: consecutive corners advance by less than π
    // and go around the cone exactly once.
    for b in bodies {
        let n = b.len();
        let mut wraps = 0;
        for k in 0..n {
            let (p, q) = (&b.vertices[(k + n - 1) % n], &b.vertices[k]);
            if !ccw_within_pi(sig, p, q) {
                return Err(GlueError::ConeAngle(b.comp));
            }
            if crate::cone::total_angle_cmp(q, p) == std::cmp::Ordering::Less {
                wraps += 1;
            }
        }
        if wraps != 1 {
            return Err(GlueError::ConeAngle(b.comp));
        }
    }
    let mut comps = UnionFind::new(bodies.len());
    for (a, b) in &pairing.edges {
        comps.union(a.body, b.body);
    }
    if (0..bodies.len()).any(|i| comps.find(i) != 0) {
        return Err(GlueError::Disconnected);
    }
    let classes = corner_classes(bodies, &pairing.edges);
    for (ci, class) in classes.iter().enumerate() {
        let steps: Vec<(Vec2, Vec2)> = class.iter().map(|&(b, j)| corner(&bodies[b], j)).collect();
        if !angles_sum_to_full_turn(&steps) {
            return Err(GlueError::AngleDefect(ci));
        }
    }
    let chi = classes.len() as i64 - pairing.edges.len() as i64 + bodies.len() as i64;
    if chi != 2 - 2 * i64::from(sig.genus()) {
        return Err(GlueError::WrongStratum(chi));
    }
    let area = bodies.iter().map(ConvexBody::double_area).sum::<Scalar>() * Scalar::ratio(1, 2);
    Ok(TranslationSurface {
        stratum: sig.clone(),
        bodies: bodies.to_vec(),
        identifications: pairing.edges.clone(),
        staples: pairing.staples.clone(),
        area,
        applied_scale: Scalar::one(),
    })
}

impl TranslationSurface {
    pub fn scaled(&self, r: &Scalar) -> TranslationSurface {
        TranslationSurface {
            stratum: self.stratum.clone(),
            bodies: self.bodies.iter().map(|b| b.scaled(r)).collect(),
            identifications: self.identifications.clone(),
            staples: self.staples.iter().map(|m| m.scaled(r)).collect(),
            area: &self.area * &(r * r),
            applied_scale: &self.applied_scale * r,
        }
    }

    /// Number of vertex classes after gluing.
    pub fn vertex_classes(&self) -> usize {
        corner_classes(&self.bodies, &self.identifications).len()
    }
}

/// Corners `(body, vertex)` grouped into the points they become after
/// gluing, ordered by first member.
pub fn corner_classes(bodies: &[ConvexBody], edges: &[(EdgeRef, EdgeRef)]) -> Vec<Vec<(usize, usize)>> {
    let mut offsets = Vec::with_capacity(bodies.len());
    let mut total = 0;
    for b in bodies {
        offsets.push(total);
        total += b.len();
    }
    let vid = |b: usize, j: usize| offsets[b] + j % bodies[b].len();
    let mut uf = UnionFind::new(total);
    for (a, b) in edges {
        let (na, nb) = (bodies[a.body].len(), bodies[b.body].len());
        uf.union(vid(a.body, a.edge + na - 1), vid(b.body, b.edge));
        uf.union(vid(a.body, a.edge), vid(b.body, b.edge + nb - 1));
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
    for (bi, b) in bodies.iter().enumerate() {
        for j in 0..b.len() {
            classes.entry(uf.find(vid(bi, j))).or_default().push((bi, j));
        }
    }
    classes.into_values().collect()
}

/// Scales to area one by `1/√area`.
pub fn rescale_unit_area(s: &TranslationSurface) -> TranslationSurface {
    if s.area.is_one() {
        return s.clone();
    }
    let r = s.area.sqrt().expect("positive area").recip().expect("nonzero");
    let mut out = s.scaled(&r);
    debug_assert!(out.area.is_one());
    out.area = Scalar::one();
    out
}

/// Lexicographically least staple listing over all relabelings.
pub fn canonical_form(s: &TranslationSurface) -> String {
    let sig = &s.stratum;
    let mut best: Option<String> = None;
    for t in enumerate_trans(sig) {
        let mut items: Vec<String> = s
            .staples
            .iter()
            .map(|m| {
                let m = t.apply_pair(sig, m).canonical();
                format!("{}~{}", m.p, m.mate)
            })
            .collect();
        items.sort();
        let txt = format!("H({}):{}", sig, items.join(";"));
        if best.as_ref().is_none_or(|b| txt < *b) {
            best = Some(txt);
        }
    }
    best.unwrap_or_default()
}
