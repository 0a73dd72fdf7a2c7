//! Metric predicates on the cone surface: π-sectors, the bracket of two
//! pairs, circumcenters, open balls and half-spaces.
//!
//! Two points of a cone at total angular distance less than `π` see each
//! other along a straight segment, so their plane vectors can be compared in a
//! single chart. Otherwise the shortest path runs through the cone point.

use std::cmp::Ordering;

use crate::cone::{sector_near, ConePoint, MarkedPair, StratumSig};
use crate::error::GeomError;
use crate::linalg::{arg_cmp_nz, Vec2};

/// True iff `p` and `q` lie in one component at total angular distance `< π`.
pub fn same_open_pi_sector(sig: &StratumSig, p: &ConePoint, q: &ConePoint) -> bool {
    p.comp == q.comp && sector_near(sig, p, &q.v) == Some(q.sector)
}

/// True iff `q` lies strictly counterclockwise of `p` by less than `π`.
pub fn ccw_within_pi(sig: &StratumSig, p: &ConePoint, q: &ConePoint) -> bool {
    p.comp == q.comp && p.v.cross(&q.v).is_positive() && same_open_pi_sector(sig, p, q)
}

/// `[P, Q]`: the point with vector `q̄ − p̄` in the component of `P`'s mate,
/// placed in the sector within `π` of the mate. `None` when `P.p` and `Q.p`
/// do not share an open π-sector or are parallel.
pub fn mate_bracket(sig: &StratumSig, pp: &MarkedPair, qq: &MarkedPair) -> Option<ConePoint> {
    if !same_open_pi_sector(sig, &pp.p, &qq.p) || pp.p.v.cross(&qq.p.v).is_zero() {
        return None;
    }
    let w = &qq.p.v - &pp.p.v;
    let m = &pp.mate;
    let sector = sector_near(sig, m, &w)?;
    Some(ConePoint::new(m.comp, sector, w))
}

/// Circumcenter of `0`, `p̄`, `q̄` as a plane vector.
pub fn circumcenter(sig: &StratumSig, p: &ConePoint, q: &ConePoint) -> Result<Vec2, GeomError> {
    if !same_open_pi_sector(sig, p, q) {
        return Err(GeomError::NotInPiSector);
    }
    circumcenter_vec(&p.v, &q.v).ok_or(GeomError::NotInPiSector)
}

/// Solves `⟨c, p⟩ = |p|²/2`, `⟨c, q⟩ = |q|²/2`; `None` if `p ∥ q`.
pub fn circumcenter_vec(p: &Vec2, q: &Vec2) -> Option<Vec2> {
    let det = p.cross(q);
    if det.is_zero() {
        return None;
    }
    let hp = p.norm2();
    let hq = q.norm2();
    let x = &(&hp * &q.y) - &(&hq * &p.y);
    let y = &(&hq * &p.x) - &(&hp * &q.x);
    let d2 = &det + &det;
    Some(Vec2::new(x / &d2, y / &d2))
}

/// Circumcenter as a cone point (same component as `p`).
pub fn circumcenter_point(sig: &StratumSig, p: &ConePoint, q: &ConePoint) -> Result<ConePoint, GeomError> {
    let c = circumcenter(sig, p, q)?;
    // ⟨c, p⟩ > 0, so c is within π/2 of p.
    let s = sector_near(sig, p, &c).expect("circumcenter lies near p");
    Ok(ConePoint::new(p.comp, s, c))
}

/// Strict membership of `z` in the open ball through `0`, `p`, `q`.
pub fn ball_contains(sig: &StratumSig, p: &ConePoint, q: &ConePoint, z: &ConePoint) -> Result<bool, GeomError> {
    let c = circumcenter_point(sig, p, q)?;
    Ok(ball_contains_center(sig, &c, z))
}

/// Strict membership of `z` in the open ball of radius `|c|` about `c`.
pub fn ball_contains_center(sig: &StratumSig, c: &ConePoint, z: &ConePoint) -> bool {
    if !same_open_pi_sector(sig, c, z) {
        return false;
    }
    let d = &z.v - &c.v;
    d.norm2() < c.v.norm2()
}

/// `z ∈ H(p)`: `z` is at least as close to the cone point as to `p`.
pub fn half_space_contains(sig: &StratumSig, p: &ConePoint, z: &ConePoint) -> bool {
    if p.comp != z.comp {
        return false;
    }
    if !same_open_pi_sector(sig, p, z) {
        return true;
    }
    let lhs = z.v.dot(&p.v);
    &lhs + &lhs <= p.v.norm2()
}

/// Orders points of one component by total angle.
pub fn angle_order(p: &ConePoint, q: &ConePoint) -> Ordering {
    p.sector.cmp(&q.sector).then_with(|| arg_cmp_nz(&p.v, &q.v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn o2() -> StratumSig {
        "2".parse().unwrap()
    }

    fn pt(c: usize, s: u32, x: i64, y: i64) -> ConePoint {
        ConePoint::ints(c, s, x, y)
    }

    #[test]
    fn pi_sectors() {
        let g = o2();
        assert!(same_open_pi_sector(&g, &pt(0, 0, 0, -1), &pt(0, 0, -1, 0)));
        assert!(!same_open_pi_sector(&g, &pt(0, 0, 1, 0), &pt(0, 0, -1, 0)));
        assert!(!same_open_pi_sector(&g, &pt(0, 0, 1, 0), &pt(0, 1, 1, 1)));
        // Across the slit: sector 0 at angle −ε and sector 1 at angle +ε.
        assert!(same_open_pi_sector(&g, &pt(0, 0, 1, -1), &pt(0, 1, 1, 1)));
        assert!(same_open_pi_sector(&g, &pt(0, 2, 1, -1), &pt(0, 0, 1, 1)));
        assert!(!same_open_pi_sector(&g, &pt(0, 0, 1, -1), &pt(0, 0, 1, 1)));
        let torus: StratumSig = "0".parse().unwrap();
        assert!(same_open_pi_sector(&torus, &pt(0, 0, 1, -1), &pt(0, 0, 1, 1)));
    }

    #[test]
    fn bracket_examples() {
        let g = o2();
        let p = MarkedPair::new(pt(0, 0, 0, -1), pt(0, 0, 0, 1));
        let q = MarkedPair::new(pt(0, 0, -1, 0), pt(0, 2, 1, 0));
        assert_eq!(mate_bracket(&g, &p, &q), Some(pt(0, 0, -1, 1)));
        assert_eq!(mate_bracket(&g, &q, &p), Some(pt(0, 1, 1, -1)));
        let par = MarkedPair::new(pt(0, 0, 0, -2), pt(0, 1, 0, 2));
        assert_eq!(mate_bracket(&g, &p, &par), None);
    }

    #[test]
    fn circumcenters() {
        let g = o2();
        let half = Scalar::ratio(1, 2);
        let c = circumcenter(&g, &pt(0, 0, 1, 0), &pt(0, 0, 0, 1)).unwrap();
        assert_eq!(c, Vec2::new(half.clone(), half.clone()));
        let c = circumcenter(&g, &pt(0, 0, 0, -1), &pt(0, 0, -1, 0)).unwrap();
        assert_eq!(c, Vec2::new(-&half, -&half));
        let c = circumcenter(&g, &pt(0, 0, 1, 0), &pt(0, 0, 1, 1)).unwrap();
        assert_eq!(c, Vec2::new(half.clone(), half.clone()));
        // Equidistant from 0, p and q.
        let (p, q) = (Vec2::ints(1, 0), Vec2::ints(1, 1));
        assert_eq!(c.norm2(), (&c - &p).norm2());
        assert_eq!(c.norm2(), (&c - &q).norm2());
        assert!(circumcenter(&g, &pt(0, 0, 1, 0), &pt(0, 0, -1, 0)).is_err());
    }

    #[test]
    fn balls() {
        let g = o2();
        let (p, q) = (pt(0, 0, 0, -1), pt(0, 0, -1, 0));
        assert!(!ball_contains(&g, &p, &q, &pt(0, 0, 1, 1)).unwrap());
        let mid = ConePoint::new(0, 0, Vec2::new(Scalar::ratio(-1, 2), Scalar::ratio(-1, 2)));
        assert!(ball_contains(&g, &p, &q, &mid).unwrap());
        // Boundary points are excluded.
        assert!(!ball_contains(&g, &p, &q, &p).unwrap());
        assert!(!ball_contains(&g, &p, &q, &pt(0, 0, -1, -1)).unwrap());
        // Same chart vector, other sector: far away on the cone.
        assert!(!ball_contains(&g, &p, &q, &ConePoint::new(0, 1, mid.v.clone())).unwrap());
    }

    #[test]
    fn half_spaces() {
        let g = o2();
        let p = pt(0, 0, 1, 0);
        let eps = ConePoint::new(0, 0, Vec2::new(Scalar::ratio(1, 3), Scalar::zero()));
        assert!(half_space_contains(&g, &p, &eps));
        assert!(!half_space_contains(&g, &p, &p));
        let torus: StratumSig = "0".parse().unwrap();
        let z = ConePoint::new(0, 0, Vec2::new(Scalar::ratio(1, 2), Scalar::from_int(5)));
        assert!(half_space_contains(&torus, &p, &z));
        assert!(!half_space_contains(&g, &p, &pt(1, 0, 1, 0)));
        assert!(half_space_contains(&g, &p, &pt(0, 1, 1, 0)));
    }
}
