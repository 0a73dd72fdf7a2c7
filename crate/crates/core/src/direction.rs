//! Finite supersets of the directions left uncovered by the images `A·Δ` of
//! the open unit disk under a group given by generators.
//!
//! A unit vector `u` lies in `A·Δ` iff `|A⁻¹u| < 1`, i.e. `uᵀQu < 0` for
//! `Q = A⁻ᵀA⁻¹ − I`. For `det A = 1` and `A` not orthogonal, `Q` is
//! indefinite and its null lines cut the circle into two arcs inside `A·Δ`
//! and two outside.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::GeomError;
use crate::linalg::{arg_cmp_nz, same_ray, Mat2, Vec2};
use crate::scalar::Scalar;

/// The symmetric form `Q = [[q11, q12], [q12, q22]]` of one group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArcPair {
    pub q11: Scalar,
    pub q12: Scalar,
    pub q22: Scalar,
    /// One direction on each null line (unnormalized).
    pub lines: [Vec2; 2],
}

impl ArcPair {
    /// `uᵀQu`.
    pub fn form(&self, u: &Vec2) -> Scalar {
        let xx = &(&u.x * &u.x) * &self.q11;
        let xy = &(&u.x * &u.y) * &self.q12;
        let yy = &(&u.y * &u.y) * &self.q22;
        &(&xx + &(&xy + &xy)) + &yy
    }

    /// True iff `u` lies in the open arcs.
    pub fn contains(&self, u: &Vec2) -> bool {
        self.form(u).is_negative()
    }

    /// The four arc endpoints as unit vectors, sorted by argument.
    pub fn unit_endpoints(&self) -> Result<Vec<Vec2>, GeomError> {
        let mut out = Vec::with_capacity(4);
        for l in &self.lines {
            let u = l.normalized()?;
            out.push(-&u);
            out.push(u);
        }
        out.sort_by(arg_cmp_nz);
        Ok(out)
    }
}

/// The arcs of `A·Δ` on the unit circle, or `None` when `A` is orthogonal.
pub fn arc_of(a: &Mat2) -> Result<Option<ArcPair>, GeomError> {
    if !a.det().is_one() {
        return Err(GeomError::DetNotOne);
    }
    let ai = a.inverse()?;
    let g = ai.transpose().mul(&ai);
    let q11 = &g.a - &Scalar::one();
    let q12 = g.b.clone();
    let q22 = &g.d - &Scalar::one();
    if q11.is_zero() && q12.is_zero() && q22.is_zero() {
        return Ok(None);
    }
    let disc = &(&q12 * &q12) - &(&q11 * &q22);
    let lines = if q22.is_zero() {
        [Vec2::ints(0, 1), Vec2::new(&q12 + &q12, -&q11)]
    } else {
        let root = disc.sqrt()?;
        let m1 = (&(-&q12) + &root) / &q22;
        let m2 = (&(-&q12) - &root) / &q22;
        [Vec2::new(Scalar::one(), m1), Vec2::new(Scalar::one(), m2)]
    };
    Ok(Some(ArcPair { q11, q12, q22, lines }))
}

/// A letter: generator index and whether it is inverted.
pub type Letter = (usize, bool);

/// Group elements given by freely reduced words of length `1..=max_len`,
/// breadth first, with duplicate matrices removed.
pub fn enumerate_words(gens: &[Mat2], max_len: usize) -> Result<Vec<(Vec<Letter>, Mat2)>, GeomError> {
    let mut letters = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        letters.push(((i, false), g.clone()));
        letters.push(((i, true), g.inverse()?));
    }
    let mut seen: HashSet<Mat2> = HashSet::new();
    seen.insert(Mat2::identity());
    let mut out = Vec::new();
    let mut frontier: Vec<(Vec<Letter>, Mat2)> = vec![(Vec::new(), Mat2::identity())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for (l, g) in &letters {
                if let Some(last) = w.last() {
                    if last.0 == l.0 && last.1 != l.1 {
                        continue;
                    }
                }
                let prod = m.mul(g);
                if seen.insert(prod.clone()) {
                    let mut w2 = w.clone();
                    w2.push(*l);
                    out.push((w2.clone(), prod.clone()));
                    next.push((w2, prod));
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Finite set of unit directions, sorted by argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionSet {
    pub dirs: Vec<Vec2>,
    pub word_len: usize,
    /// Words whose arcs were used.
    pub words: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaResult {
    Covered(DirectionSet),
    /// Some open arc of the circle is missed by every enumerated image.
    NotCovered {
        word_len: usize,
    },
}

/// Directions not covered by the arcs of any word of length `≤ max_len`.
pub fn theta_superset(gens: &[Mat2], max_len: usize) -> Result<ThetaResult, GeomError> {
    for g in gens {
        if !g.det().is_one() {
            return Err(GeomError::DetNotOne);
        }
    }
    let words = enumerate_words(gens, max_len)?;
    let mut arcs: Vec<ArcPair> = Vec::new();
    let mut arc_seen: HashSet<(Scalar, Scalar, Scalar)> = HashSet::new();
    for (_, m) in &words {
        if let Some(a) = arc_of(m)? {
            if arc_seen.insert((a.q11.clone(), a.q12.clone(), a.q22.clone())) {
                arcs.push(a);
            }
        }
    }
    if arcs.is_empty() {
        return Ok(ThetaResult::NotCovered { word_len: max_len });
    }
    let mut ends: Vec<Vec2> = Vec::new();
    for a in &arcs {
        for l in &a.lines {
            for e in [l.clone(), -l] {
                if !ends.iter().any(|f| same_ray(f, &e)) {
                    ends.push(e);
                }
            }
        }
    }
    ends.sort_by(arg_cmp_nz);
    let n = ends.len();
    for k in 0..n {
        let (a, b) = (&ends[k], &ends[(k + 1) % n]);
        let sample = match a.cross(b).signum() {
            1 => a + b,
            // Gap of at least π: its midpoint direction is a quarter turn on.
            _ => a.rot90(),
        };
        if !arcs.iter().any(|arc| arc.contains(&sample)) {
            return Ok(ThetaResult::NotCovered { word_len: max_len });
        }
    }
    let mut dirs = Vec::new();
    for e in ends {
        if arcs.iter().all(|arc| !arc.contains(&e)) {
            dirs.push(e.normalized()?);
        }
    }
    dirs.sort_by(arg_cmp_nz);
    Ok(ThetaResult::Covered(DirectionSet {
        dirs,
        word_len: max_len,
        words: words.len(),
    }))
}

/// Sorts and compares direction sets as sets of exact vectors.
pub fn same_directions(a: &[Vec2], b: &[Vec2]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(arg_cmp_nz);
    b.sort_by(arg_cmp_nz);
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x == y)
}

/// Arg order helper for callers sorting direction lists.
pub fn direction_order(a: &Vec2, b: &Vec2) -> Ordering {
    arg_cmp_nz(a, b)
}
