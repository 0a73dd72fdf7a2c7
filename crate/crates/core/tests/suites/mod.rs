//! Randomized property suites, shared by the core property tests and the
//! acceptance gate. Every assertion is exact.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use veech_core::body::convex_body;
use veech_core::cone::sector_near;
use veech_core::predicates::{
    ball_contains, ball_contains_center, circumcenter_point, half_space_contains, mate_bracket, same_open_pi_sector,
};
use veech_core::triple::solve_scalars;
use veech_core::{arg_cmp, enumerate_trans, CanonicalMap, ConePoint, MarkedPair, Mat2, Scalar, StratumSig, Vec2};

pub const CASES: u32 = 1000;

const STRATA: [&str; 6] = ["0", "2", "1,1", "0,0", "4", "2,2"];

type Outcome = Result<(), TestCaseError>;

fn rat() -> impl Strategy<Value = Scalar> {
    (-24i64..=24, 1i64..=6).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn pos_rat() -> impl Strategy<Value = Scalar> {
    (1i64..=30, 1i64..=7).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn vec2() -> impl Strategy<Value = Vec2> {
    (rat(), rat()).prop_filter_map("nonzero", |(x, y)| {
        let v = Vec2::new(x, y);
        (!v.is_zero()).then_some(v)
    })
}

fn stratum() -> impl Strategy<Value = StratumSig> {
    prop::sample::select(STRATA.to_vec()).prop_map(|s| s.parse().unwrap())
}

fn sig_point() -> impl Strategy<Value = (StratumSig, ConePoint)> {
    stratum().prop_flat_map(|sig| {
        let k = sig.kappa();
        (0..k, 0u32..16, vec2()).prop_map(move |(c, s, v)| {
            let s = s % sig.sectors(c);
            (sig.clone(), ConePoint::new(c, s, v))
        })
    })
}

/// Products of `S`, `T`, `T⁻¹` and a rational diagonal.
fn positive_matrix() -> impl Strategy<Value = Mat2> {
    (prop::collection::vec(0u8..4, 0..7), pos_rat()).prop_map(|(word, d)| {
        let mut m = Mat2::identity();
        for l in word {
            let g = match l {
                0 => Mat2::s(),
                1 => Mat2::t_pow(1),
                2 => Mat2::t_pow(-1),
                _ => Mat2::new(d.clone(), Scalar::zero(), Scalar::zero(), d.recip().unwrap()),
            };
            m = m.mul(&g);
        }
        m
    })
}

fn pair_on(sig: &StratumSig, p: ConePoint, mc: usize, ms: u32) -> MarkedPair {
    let mc = mc % sig.kappa();
    let mate = ConePoint::new(mc, ms % sig.sectors(mc), -&p.v);
    MarkedPair::new(p, mate)
}

/// Two pairs whose first points share an open π-sector and are not parallel.
fn bracket_input() -> impl Strategy<Value = (StratumSig, MarkedPair, MarkedPair)> {
    (sig_point(), vec2(), 0usize..4, 0u32..8, 0usize..4, 0u32..8).prop_filter_map(
        "q near p",
        |((sig, p), w, mc, ms, nc, ns)| {
            if p.v.cross(&w).is_zero() {
                return None;
            }
            let s = sector_near(&sig, &p, &w)?;
            let q = ConePoint::new(p.comp, s, w);
            let pp = pair_on(&sig, p, mc, ms);
            let qq = pair_on(&sig, q, nc, ns);
            Some((sig, pp, qq))
        },
    )
}

fn root2() -> Scalar {
    Scalar::from_int(2).sqrt().unwrap()
}

fn check<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Outcome) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new(config).run(&strategy, test).map_err(|e| e.to_string())
}

pub fn canonical_map_projects_linearly(cases: u32) -> Result<(), String> {
    check(cases, (sig_point(), positive_matrix()), |((sig, p), a)| {
        let f = CanonicalMap::new(&a).unwrap();
        let img = f.apply(&sig, &p);
        prop_assert_eq!(&img.v, &a.apply(&p.v));
        prop_assert_eq!(img.comp, p.comp);
        let n = sig.sectors(p.comp);
        prop_assert!(img.sector == p.sector || img.sector == (p.sector + 1) % n);
        prop_assert_eq!(f.apply_inv(&sig, &img), p);
        Ok(())
    })
}

pub fn relabeling_commutes(cases: u32) -> Result<(), String> {
    check(
        cases,
        (sig_point(), positive_matrix(), 0usize..64),
        |((sig, p), a, k)| {
            let trans = enumerate_trans(&sig);
            let t = &trans[k % trans.len()];
            let f = CanonicalMap::new(&a).unwrap();
            prop_assert_eq!(t.apply(&sig, &f.apply(&sig, &p)), f.apply(&sig, &t.apply(&sig, &p)));
            Ok(())
        },
    )
}

pub fn bracket_scales(cases: u32) -> Result<(), String> {
    check(
        cases,
        (bracket_input(), pos_rat(), any::<bool>()),
        |((sig, pp, qq), r, irrational)| {
            let r = if irrational { &r * &root2() } else { r };
            let b = mate_bracket(&sig, &pp, &qq).expect("defined");
            let scaled = mate_bracket(&sig, &pp.scaled(&r), &qq.scaled(&r)).expect("defined");
            prop_assert_eq!(scaled, b.scaled(&r));
            Ok(())
        },
    )
}

pub fn bracket_involution(cases: u32) -> Result<(), String> {
    check(cases, bracket_input(), |(sig, pp, qq)| {
        let b = MarkedPair::new(
            mate_bracket(&sig, &pp, &qq).expect("defined"),
            mate_bracket(&sig, &qq, &pp).expect("defined"),
        );
        prop_assert_eq!(mate_bracket(&sig, &pp.swapped(), &b), Some(qq.p.clone()));
        prop_assert_eq!(mate_bracket(&sig, &b, &pp.swapped()), Some(qq.mate.clone()));
        Ok(())
    })
}

/// Cramer's rule on coordinates for `s·q − t·u = r·p`.
fn cramer(p: &Vec2, q: &Vec2, u: &Vec2, r: &Scalar) -> (Scalar, Scalar) {
    let det = q.cross(u);
    let rp = p.scale(r);
    let s = &(&rp.x * &u.y - &rp.y * &u.x) / &det;
    let t = &(&rp.x * &q.y - &rp.y * &q.x) / &det;
    (s, t)
}

pub fn scalars_unique_and_covariant(cases: u32) -> Result<(), String> {
    check(
        cases,
        (vec2(), vec2(), vec2(), pos_rat(), pos_rat()),
        |(p, q, u, r, k)| {
            let mk = |v: &Vec2| MarkedPair::new(ConePoint::new(0, 0, v.clone()), ConePoint::new(0, 0, -v));
            let (pp, qq, uu) = (mk(&p), mk(&q), mk(&u));
            let det = q.cross(&u);
            match solve_scalars(&pp, &qq, &uu, &r) {
                Some((s, t)) => {
                    prop_assert!(s.is_positive() && t.is_positive());
                    prop_assert_eq!(u.scale(&t), &q.scale(&s) - &p.scale(&r));
                    prop_assert!(!det.is_zero());
                    let (s2, t2) = cramer(&p, &q, &u, &r);
                    prop_assert_eq!(&s, &s2);
                    prop_assert_eq!(&t, &t2);
                    let (ks, kt) = solve_scalars(&pp, &qq, &uu, &(&r * &k)).expect("scaled");
                    prop_assert_eq!(ks, &s * &k);
                    prop_assert_eq!(kt, &t * &k);
                }
                None => {
                    if !det.is_zero() {
                        let (s2, t2) = cramer(&p, &q, &u, &r);
                        prop_assert!(!(s2.is_positive() && t2.is_positive()));
                    }
                }
            }
            Ok(())
        },
    )
}

pub fn open_balls_exclude_boundary(cases: u32) -> Result<(), String> {
    check(cases, bracket_input(), |(sig, pp, qq)| {
        let (p, q) = (&pp.p, &qq.p);
        let c = circumcenter_point(&sig, p, q).unwrap();
        prop_assert!(!ball_contains(&sig, p, q, p).unwrap());
        prop_assert!(!ball_contains(&sig, p, q, q).unwrap());
        prop_assert!(ball_contains_center(&sig, &c, &c));
        let mid = (&p.v + &q.v).scale(&Scalar::ratio(1, 2));
        if let Some(s) = sector_near(&sig, &c, &mid) {
            prop_assert!(ball_contains_center(&sig, &c, &ConePoint::new(c.comp, s, mid)));
        }
        // Antipodes of p and q on the circle.
        for x in [p, q] {
            let w = &c.v.scale(&Scalar::from_int(2)) - &x.v;
            if let Some(s) = sector_near(&sig, &c, &w) {
                let z = ConePoint::new(c.comp, s, w);
                prop_assert!(same_open_pi_sector(&sig, &c, &z));
                prop_assert!(!ball_contains_center(&sig, &c, &z));
            }
        }
        Ok(())
    })
}

pub fn half_spaces_closed(cases: u32) -> Result<(), String> {
    check(cases, (sig_point(), rat()), |((sig, p), t)| {
        let t = &t * &Scalar::ratio(1, 30);
        let on = &p.v.scale(&Scalar::ratio(1, 2)) + &p.v.rot90().scale(&t);
        let eps = Scalar::ratio(1, 1000);
        let out = &on + &p.v.scale(&eps);
        let inn = &on - &p.v.scale(&eps);
        let at = |v: Vec2| {
            let s = sector_near(&sig, &p, &v).expect("within π/2");
            ConePoint::new(p.comp, s, v)
        };
        prop_assert!(half_space_contains(&sig, &p, &at(on)));
        prop_assert!(!half_space_contains(&sig, &p, &at(out)));
        prop_assert!(half_space_contains(&sig, &p, &at(inn)));
        Ok(())
    })
}

/// Brute force: feasible circumcenters are the corners; a point is essential
/// when two distinct corners lie on its bisector.
fn planar_oracle(pts: &[Vec2]) -> (BTreeSet<Vec2>, BTreeSet<Vec2>) {
    let on_or_inside = |c: &Vec2, p: &Vec2| {
        let d = c.dot(p);
        &d + &d <= p.norm2()
    };
    let mut corners = BTreeSet::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let det = a.cross(b);
            if det.is_zero() {
                continue;
            }
            let (ha, hb) = (a.norm2(), b.norm2());
            let two_det = &Scalar::from_int(2) * &det;
            let c = Vec2::new(
                &(&ha * &b.y - &hb * &a.y) / &two_det,
                &(&hb * &a.x - &ha * &b.x) / &two_det,
            );
            if pts.iter().all(|p| on_or_inside(&c, p)) {
                corners.insert(c);
            }
        }
    }
    let essential = pts
        .iter()
        .filter(|p| {
            corners
                .iter()
                .filter(|c| {
                    let d = c.dot(p);
                    &d + &d == p.norm2()
                })
                .count()
                >= 2
        })
        .cloned()
        .collect();
    (essential, corners)
}

fn shoelace(corners: &BTreeSet<Vec2>) -> Scalar {
    let mut v: Vec<&Vec2> = corners.iter().collect();
    v.sort_by(|a, b| arg_cmp(a, b).unwrap());
    (0..v.len()).map(|k| v[k].cross(v[(k + 1) % v.len()])).sum()
}

fn point_cloud() -> impl Strategy<Value = Vec<Vec2>> {
    prop::collection::vec((-6i64..=6, -6i64..=6), 1..14).prop_map(|xs| {
        let mut pts: Vec<Vec2> = [(9, 0), (0, 9), (-9, 0), (0, -9)]
            .iter()
            .map(|&(x, y)| Vec2::ints(x, y))
            .collect();
        for (x, y) in xs {
            let v = Vec2::ints(x, y);
            if !v.is_zero() && !pts.contains(&v) {
                pts.push(v);
            }
        }
        pts
    })
}

pub fn convex_body_oracle(cases: u32) -> Result<(), String> {
    check(cases, point_cloud(), |pts| {
        let torus: StratumSig = "0".parse().unwrap();
        let cone: Vec<ConePoint> = pts.iter().map(|v| ConePoint::new(0, 0, v.clone())).collect();
        let body = convex_body(&torus, 0, &cone).unwrap();
        let (essential, corners) = planar_oracle(&pts);
        let got: BTreeSet<Vec2> = body.supports.iter().map(|p| p.v.clone()).collect();
        prop_assert_eq!(&got, &essential);
        let got_corners: BTreeSet<Vec2> = body.vertices.iter().map(|p| p.v.clone()).collect();
        prop_assert_eq!(&got_corners, &corners);
        prop_assert_eq!(body.double_area(), shoelace(&corners));

        // The same cloud in every sector of a cone of angle 6π.
        let o2: StratumSig = "2".parse().unwrap();
        let copies: Vec<ConePoint> = (0..3)
            .flat_map(|s| pts.iter().map(move |v| ConePoint::new(0, s, v.clone())))
            .collect();
        let big = convex_body(&o2, 0, &copies).unwrap();
        prop_assert_eq!(big.len(), 3 * essential.len());
        prop_assert_eq!(big.double_area(), &shoelace(&corners) * &Scalar::from_int(3));
        Ok(())
    })
}

/// Bounds `⌊√n·10^k⌋ ≤ √n·10^k ≤ hi`.
fn root_bounds(n: i128, k: u32) -> (i128, i128) {
    let target = n * 10i128.pow(2 * k);
    let (mut lo, mut hi) = (0i128, 10i128.pow(k) * 4);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if mid * mid <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo * lo == target {
        (lo, lo)
    } else {
        (lo, lo + 1)
    }
}

/// Sign of `a + b√2 + c√3 + d√6` by interval refinement in integers.
fn interval_sign(coef: [i128; 4]) -> Option<i32> {
    if coef == [0; 4] {
        return Some(0);
    }
    for k in [4u32, 8, 12, 15] {
        let mut lo = coef[0] * 10i128.pow(k);
        let mut hi = lo;
        for (c, n) in coef[1..].iter().zip([2, 3, 6]) {
            let (rl, rh) = root_bounds(n, k);
            let (x, y) = (c * rl, c * rh);
            lo += x.min(y);
            hi += x.max(y);
        }
        if lo > 0 {
            return Some(1);
        }
        if hi < 0 {
            return Some(-1);
        }
    }
    None
}

pub fn sign_matches_interval_oracle(cases: u32) -> Result<(), String> {
    check(cases, (prop::array::uniform4(-60i128..=60), 1i64..=9), |(coef, den)| {
        let expected = interval_sign(coef);
        prop_assume!(expected.is_some());
        let r2 = root2();
        let r3 = Scalar::from_int(3).sqrt().unwrap();
        let r6 = &r2 * &r3;
        let c = |i: usize| Scalar::ratio(coef[i] as i64, den);
        let x = c(0) + &c(1) * &r2 + &c(2) * &r3 + &c(3) * &r6;
        prop_assert_eq!(Some(x.signum()), expected);
        prop_assert_eq!(x.is_zero(), coef == [0; 4]);
        Ok(())
    })
}

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

pub const ALL: [Suite; 9] = [
    ("proj after f_A equals A after proj", canonical_map_projects_linearly),
    ("relabeling commutes with f_A", relabeling_commutes),
    ("bracket scales with its arguments", bracket_scales),
    ("bracket involution", bracket_involution),
    ("scalar solve unique and covariant", scalars_unique_and_covariant),
    ("open balls exclude their boundary", open_balls_exclude_boundary),
    ("half-spaces are closed", half_spaces_closed),
    ("convex body agrees with brute force", convex_body_oracle),
    ("scalar sign agrees with interval oracle", sign_matches_interval_oracle),
];
