//! Search for possible permissible triples `(p, q, u)` across three
//! truncated simulations, with scalars `(r, s, t)` normalized to `r = 1`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::cone::{ConePoint, MarkedPair, StratumSig};
use crate::linalg::Vec2;
use crate::predicates::{ball_contains_center, circumcenter_point, mate_bracket, same_open_pi_sector};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleMatch {
    /// Simulation ids of the sources of `P`, `Q`, `U`.
    pub sims: [usize; 3],
    pub pairs: [MarkedPair; 3],
    pub scalars: [Scalar; 3],
}

impl TripleMatch {
    /// The cyclic rotation `(Q°, U°, P)` with scalars `(s, t, r)`.
    pub fn rotated(&self) -> TripleMatch {
        let [p, q, u] = &self.pairs;
        let [a, b, c] = self.sims;
        let [r, s, t] = &self.scalars;
        TripleMatch {
            sims: [b, c, a],
            pairs: [q.swapped(), u.swapped(), p.clone()],
            scalars: [s.clone(), t.clone(), r.clone()],
        }
    }

    /// Same triple with scalars divided so that the first one is 1.
    pub fn normalized(&self) -> TripleMatch {
        let r = &self.scalars[0];
        let mut out = self.clone();
        for s in out.scalars.iter_mut() {
            *s = &*s / r;
        }
        out
    }

    /// `(rP, sQ, tU)`.
    pub fn scaled_pairs(&self) -> [MarkedPair; 3] {
        [
            self.pairs[0].scaled(&self.scalars[0]),
            self.pairs[1].scaled(&self.scalars[1]),
            self.pairs[2].scaled(&self.scalars[2]),
        ]
    }
}

/// Solves `t·ū = s·q̄ − r·p̄` for positive `(s, t)`.
pub fn solve_scalars(p: &MarkedPair, q: &MarkedPair, u: &MarkedPair, r: &Scalar) -> Option<(Scalar, Scalar)> {
    let (pv, qv, uv) = (&p.p.v, &q.p.v, &u.p.v);
    let det = qv.cross(uv);
    if det.is_zero() {
        return None;
    }
    let s = &(&pv.cross(uv) / &det) * r;
    let t = &(&pv.cross(qv) / &det) * r;
    (s.is_positive() && t.is_positive()).then_some((s, t))
}

/// True iff `[rp, sq] = tu` and `[sq, rp] = tu°` as points of the cone.
pub fn brackets_match(sig: &StratumSig, p: &MarkedPair, q: &MarkedPair, u: &MarkedPair, scalars: &[Scalar; 3]) -> bool {
    let rp = p.scaled(&scalars[0]);
    let sq = q.scaled(&scalars[1]);
    let tu = u.scaled(&scalars[2]);
    mate_bracket(sig, &rp, &sq).as_ref() == Some(&tu.p) && mate_bracket(sig, &sq, &rp).as_ref() == Some(&tu.mate)
}

/// Both orientations of every pair with `|p|² ≤ radius2` (all if `None`).
pub fn oriented_short(pairs: &[MarkedPair], radius2: Option<&Scalar>) -> Vec<MarkedPair> {
    let mut out = Vec::new();
    for m in pairs {
        if radius2.is_some_and(|r| m.p.v.norm2() > *r) {
            continue;
        }
        out.push(m.clone());
        out.push(m.swapped());
    }
    out
}

/// Key identifying a triple up to a common positive scale of its points.
fn scale_free_key(t: &TripleMatch) -> Vec<ConePoint> {
    let v = &t.pairs[0].p.v;
    let lam = if v.x.is_zero() { v.y.abs() } else { v.x.abs() };
    let inv = lam.recip().expect("nonzero vector");
    let mut key = Vec::with_capacity(6);
    for m in &t.pairs {
        key.push(m.p.scaled(&inv));
        key.push(m.mate.scaled(&inv));
    }
    key
}

/// All `(P, Q, U)` in `A × B × C` (oriented, short) passing the scalar solve
/// with `r = 1` and the bracket check.
pub fn possible_triples(
    sig: &StratumSig,
    a: (usize, &[MarkedPair]),
    b: (usize, &[MarkedPair]),
    c: (usize, &[MarkedPair]),
) -> Vec<TripleMatch> {
    let one = Scalar::one();
    let mut out = Vec::new();
    let mut seen: HashSet<Vec<ConePoint>> = HashSet::new();
    for p in a.1 {
        for q in b.1 {
            if !same_open_pi_sector(sig, &p.p, &q.p) {
                continue;
            }
            let pq = p.p.v.cross(&q.p.v);
            let spq = pq.signum();
            if spq == 0 {
                continue;
            }
            for u in c.1 {
                if u.p.comp != p.mate.comp || u.mate.comp != q.mate.comp {
                    continue;
                }
                let qu = q.p.v.cross(&u.p.v);
                if qu.signum() != spq || p.p.v.cross(&u.p.v).signum() != spq {
                    continue;
                }
                let Some((s, t)) = solve_scalars(p, q, u, &one) else {
                    continue;
                };
                let scalars = [one.clone(), s, t];
                if !brackets_match(sig, p, q, u, &scalars) {
                    continue;
                }
                let m = TripleMatch {
                    sims: [a.0, b.0, c.0],
                    pairs: [p.clone(), q.clone(), u.clone()],
                    scalars,
                };
                if seen.insert(scale_free_key(&m)) {
                    out.push(m);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Refutation {
    /// A universe point lies strictly inside one of the three balls.
    Refuted {
        ball: usize,
        point: ConePoint,
    },
    NotRefuted,
}

/// The three balls `B(rp, sq)`, `B(tu, rp°)`, `B(sq°, tu°)` as
/// `(center, |center|²)`.
pub fn triple_balls(sig: &StratumSig, t: &TripleMatch) -> Vec<(ConePoint, Scalar)> {
    let [rp, sq, tu] = t.scaled_pairs();
    [(&rp.p, &sq.p), (&tu.p, &rp.mate), (&sq.mate, &tu.mate)]
        .into_iter()
        .filter_map(|(x, y)| circumcenter_point(sig, x, y).ok())
        .map(|c| {
            let r2 = c.v.norm2();
            (c, r2)
        })
        .collect()
}

/// Looks for a point of a finite, already scaled universe strictly inside
/// one of the three balls.
pub fn refute_by_balls<'a>(
    sig: &StratumSig,
    t: &TripleMatch,
    universe: impl IntoIterator<Item = &'a ConePoint>,
) -> Refutation {
    let balls = triple_balls(sig, t);
    let four = Scalar::from_int(4);
    let bounds: Vec<Scalar> = balls.iter().map(|(_, r2)| &four * r2).collect();
    for z in universe {
        let z2 = z.v.norm2();
        for (k, (c, _)) in balls.iter().enumerate() {
            if z.comp == c.comp && z2 < bounds[k] && ball_contains_center(sig, c, z) {
                return Refutation::Refuted {
                    ball: k,
                    point: z.clone(),
                };
            }
        }
    }
    Refutation::NotRefuted
}

/// Every point of the three orbits scaled by the triple's scalars.
pub fn triple_universe(t: &TripleMatch, orbits: [&[MarkedPair]; 3]) -> Vec<ConePoint> {
    let mut out = Vec::new();
    for (k, pairs) in orbits.iter().enumerate() {
        for m in pairs.iter() {
            out.push(m.p.scaled(&t.scalars[k]));
            out.push(m.mate.scaled(&t.scalars[k]));
        }
    }
    out
}

/// Convenience for tests and the CLI: a unit vector at 45° multiples.
pub fn diag_unit(sx: i64, sy: i64) -> Vec2 {
    let h = &Scalar::from_int(2).sqrt().expect("positive") * &Scalar::ratio(1, 2);
    Vec2::new(&h * &Scalar::from_int(sx), &h * &Scalar::from_int(sy))
}
