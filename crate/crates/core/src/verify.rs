//! Checking that generators act on a glued surface.
//!
//! A generator `A` passes with a relabeling `τ` when every staple, pushed
//! through `τ∘f_A`, is again a marked pair of the truncated universe and is
//! realized on the surface: the straight segment leaving the image point's
//! cone point with that holonomy ends at a cone point, arriving as the
//! image mate.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::builder::{corner, corner_classes, TranslationSurface};
use crate::cone::{enumerate_trans, sector_near, CanonicalMap, ConePoint, MarkedPair, StratumSig, TransElem};
use crate::linalg::{same_ray, Mat2, Vec2};
use crate::predicates::ccw_within_pi;
use crate::scalar::Scalar;

const MAX_STEPS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorStatus {
    Verified { twist: TransElem, depth: usize },
    Unknown { depth: usize },
}

impl GeneratorStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, GeneratorStatus::Verified { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub generators: Vec<(Mat2, GeneratorStatus)>,
    /// Containment of the group in the Veech group; equality is not checked.
    pub verified: bool,
}

/// Why a straight segment is not a saddle connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceFailure {
    /// The segment ends at a regular point.
    EndsAtRegularPoint,
    /// The segment runs through a cone point before its end.
    HitsConePoint,
    BadStart,
    TooLong,
}

struct Hit {
    edge: usize,
    lambda: Scalar,
    mu: Scalar,
}

/// The corner index when `mu` sits at an end of `edge`.
fn corner_of(n: usize, edge: usize, mu: &Scalar) -> Option<usize> {
    if mu.is_zero() {
        Some((edge + n - 1) % n)
    } else if mu.is_one() {
        Some(edge)
    } else {
        None
    }
}

/// Edge of `body` whose angular span contains `x`.
fn edge_at(sig: &StratumSig, s: &TranslationSurface, body: usize, x: &ConePoint) -> Option<usize> {
    let b = &s.bodies[body];
    (0..b.len()).find(|&k| {
        let (v0, v1) = b.edge(k);
        let on = |v: &ConePoint| v.sector == x.sector && same_ray(&v.v, &x.v);
        on(v0) || on(v1) || (ccw_within_pi(sig, v0, x) && ccw_within_pi(sig, x, v1))
    })
}

/// First exit of the ray `x + λ·dir`, λ > 0, through the boundary of `body`.
fn exit_from(sig: &StratumSig, s: &TranslationSurface, body: usize, x: &ConePoint, dir: &Vec2) -> Option<Hit> {
    let b = &s.bodies[body];
    let n = b.len();
    if x.v.is_zero() {
        let probe = ConePoint::new(x.comp, x.sector, dir.clone());
        let k = edge_at(sig, s, body, &probe)?;
        let (v0, v1) = b.edge(k);
        for (v, mu) in [(v0, Scalar::zero()), (v1, Scalar::one())] {
            if v.sector == x.sector && same_ray(&v.v, dir) {
                return Some(Hit {
                    edge: k,
                    lambda: &v.v.dot(dir) / &dir.norm2(),
                    mu,
                });
            }
        }
        let e = &b.supports[k].v;
        let lambda = &e.norm2() / &(&e.dot(dir) * &Scalar::from_int(2));
        let y = dir.scale(&lambda);
        let d = &v1.v - &v0.v;
        let mu = &(&y - &v0.v).dot(&d) / &d.norm2();
        return Some(Hit { edge: k, lambda, mu });
    }
    let k0 = edge_at(sig, s, body, x)?;
    let ccw = !x.v.cross(dir).is_negative();
    for step in 0..n {
        let k = if ccw { (k0 + step) % n } else { (k0 + n - step % n) % n };
        let (v0, v1) = b.edge(k);
        let d = &v1.v - &v0.v;
        let denom = dir.cross(&d);
        if denom.is_zero() {
            continue;
        }
        let w = &v0.v - &x.v;
        let lambda = &w.cross(&d) / &denom;
        let mu = &w.cross(dir) / &denom;
        if lambda.is_positive() && !mu.is_negative() && mu <= Scalar::one() {
            return Some(Hit { edge: k, lambda, mu });
        }
    }
    None
}

/// Follows the segment with holonomy `start.v` from the cone point of
/// `start.comp`, leaving in the direction of `start`. Returns the mate point
/// recorded at the far end.
pub fn trace(sig: &StratumSig, s: &TranslationSurface, start: &ConePoint) -> Result<ConePoint, TraceFailure> {
    if start.v.is_zero() || start.comp >= s.bodies.len() {
        return Err(TraceFailure::BadStart);
    }
    let classes = corner_classes(&s.bodies, &s.identifications);
    let mut class_of = std::collections::HashMap::new();
    for (ci, c) in classes.iter().enumerate() {
        for &bj in c {
            class_of.insert(bj, ci);
        }
    }
    let mut partner = std::collections::HashMap::new();
    for (a, b) in &s.identifications {
        partner.insert((a.body, a.edge), (b.body, b.edge));
        partner.insert((b.body, b.edge), (a.body, a.edge));
    }
    let dir = start.v.clone();
    let mut body = start.comp;
    let mut x = ConePoint::new(start.comp, start.sector, Vec2::zero());
    let mut rem = dir.clone();
    for _ in 0..MAX_STEPS {
        if !x.v.is_zero() && x.v.cross(&rem).is_zero() && x.v.dot(&rem).is_negative() {
            return if (&x.v + &rem).is_zero() {
                Ok(ConePoint::new(s.bodies[body].comp, x.sector, -&dir))
            } else {
                Err(TraceFailure::HitsConePoint)
            };
        }
        let hit = exit_from(sig, s, body, &x, &rem).ok_or(TraceFailure::BadStart)?;
        if hit.lambda >= Scalar::one() {
            return Err(TraceFailure::EndsAtRegularPoint);
        }
        let b = &s.bodies[body];
        let y = &x.v + &rem.scale(&hit.lambda);
        rem = rem.scale(&(Scalar::one() - &hit.lambda));
        if let Some(j) = corner_of(b.len(), hit.edge, &hit.mu) {
            // Through a vertex: continue in the corner whose wedge holds the
            // direction.
            let class = &classes[class_of[&(body, j)]];
            let &(b2, j2) = class
                .iter()
                .find(|&&(cb, cj)| {
                    let (out, inn) = corner(&s.bodies[cb], cj);
                    same_ray(&out, &rem) || (out.cross(&rem).is_positive() && rem.cross(&inn).is_positive())
                })
                .ok_or(TraceFailure::BadStart)?;
            body = b2;
            x = s.bodies[b2].vertices[j2].clone();
        } else {
            let support = &b.supports[hit.edge];
            let (b2, k2) = partner[&(body, hit.edge)];
            let shifted = &y - &support.v;
            let far = &s.bodies[b2].supports[k2];
            let sector = sector_near(sig, far, &shifted).ok_or(TraceFailure::BadStart)?;
            body = b2;
            x = ConePoint::new(far.comp, sector, shifted);
        }
    }
    Err(TraceFailure::TooLong)
}

/// True iff `m` is a saddle connection of `s` with the given mate.
pub fn realized(sig: &StratumSig, s: &TranslationSurface, m: &MarkedPair) -> bool {
    trace(sig, s, &m.p).is_ok_and(|q| q == m.mate)
}

pub fn verify_generator(
    sig: &StratumSig,
    s: &TranslationSurface,
    a: &Mat2,
    universe: &[MarkedPair],
    depth: usize,
) -> GeneratorStatus {
    let Ok(f) = CanonicalMap::new(a) else {
        return GeneratorStatus::Unknown { depth };
    };
    let known: HashSet<MarkedPair> = universe.iter().map(MarkedPair::canonical).collect();
    for twist in enumerate_trans(sig) {
        let images: Vec<MarkedPair> = s
            .staples
            .iter()
            .map(|m| twist.apply_pair(sig, &f.apply_pair(sig, m)))
            .collect();
        if images
            .iter()
            .all(|m| known.contains(&m.canonical()) && realized(sig, s, m))
        {
            return GeneratorStatus::Verified { twist, depth };
        }
    }
    GeneratorStatus::Unknown { depth }
}

pub fn verify_all(
    sig: &StratumSig,
    s: &TranslationSurface,
    gens: &[Mat2],
    universe: &[MarkedPair],
    depth: usize,
) -> VerificationReport {
    let generators: Vec<(Mat2, GeneratorStatus)> = gens
        .iter()
        .map(|a| (a.clone(), verify_generator(sig, s, a, universe, depth)))
        .collect();
    let verified = generators.iter().all(|(_, st)| st.is_verified());
    VerificationReport { generators, verified }
}
