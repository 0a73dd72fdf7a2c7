use std::collections::BTreeMap;

use veech_core::body::convex_body_pruned;
use veech_core::builder::{glue, pair_essentials, rescale_unit_area, GlueError};
use veech_core::pipeline::{build_surface, run};
use veech_core::simulation::{expand, SimDescriptor};
use veech_core::triple::diag_unit;
use veech_core::verify::verify_all;
use veech_core::{
    ConePoint, GeneratorStatus, MarkedPair, Mat2, RunConfig, Scalar, StratumSig, SurfaceRecord, TransElem,
    TranslationSurface, Vec2,
};

fn o2() -> StratumSig {
    "2".parse().unwrap()
}

fn gens() -> Vec<Mat2> {
    vec![Mat2::s(), Mat2::t_pow(2)]
}

fn rho(k: u32) -> TransElem {
    TransElem {
        perm: vec![0],
        rot: vec![k],
    }
}

fn root(n: i64) -> Scalar {
    Scalar::from_int(n).sqrt().unwrap()
}

/// The three seeds behind the L-shaped surface.
fn seeds() -> [SimDescriptor; 3] {
    let d = |direction: Vec2, p: u32, m: u32| SimDescriptor {
        direction,
        p_sector: (0, p),
        mate_sector: (0, m),
        twists: vec![rho(2), rho(0)],
        cosets: vec![rho(0)],
    };
    [
        d(Vec2::ints(1, 0), 0, 2),
        d(Vec2::ints(1, 0), 2, 0),
        d(diag_unit(1, 1), 0, 1),
    ]
}

/// Orbits scaled by `(1, 1, √2)`, keeping only the selected seeds.
fn universe(depth: usize, keep: [bool; 3]) -> Vec<MarkedPair> {
    let scal = [Scalar::one(), Scalar::one(), root(2)];
    let mut out = Vec::new();
    for (k, d) in seeds().iter().enumerate() {
        if keep[k] {
            let o = expand(&o2(), &gens(), d, depth).unwrap();
            out.extend(o.pairs_at(depth).iter().map(|m| m.scaled(&scal[k])));
        }
    }
    out
}

fn pt(s: u32, x: i64, y: i64) -> ConePoint {
    ConePoint::ints(0, s, x, y)
}

fn fixture() -> TranslationSurface {
    build_surface(&o2(), &universe(4, [true; 3])).expect("fixture glues")
}

#[test]
fn fixture_pairs_into_six_staples() {
    let uni = universe(4, [true; 3]);
    let pts: Vec<ConePoint> = uni.iter().flat_map(|m| [m.p.clone(), m.mate.clone()]).collect();
    let body = convex_body_pruned(&o2(), 0, &pts).unwrap();
    assert_eq!(body.supports.len(), 12);
    let pairing = pair_essentials(std::slice::from_ref(&body), &uni).unwrap();
    assert_eq!(pairing.staples.len(), 6);
    let canon: Vec<MarkedPair> = pairing.staples.iter().map(MarkedPair::canonical).collect();
    for m in [
        MarkedPair::new(pt(0, 0, -1), pt(0, 0, 1)),
        MarkedPair::new(pt(0, 1, 0), pt(2, -1, 0)),
    ] {
        assert!(canon.contains(&m.canonical()), "{} ~ {}", m.p, m.mate);
    }
}

#[test]
fn fixture_glues_to_three_squares() {
    let s = fixture();
    assert_eq!(s.area, Scalar::from_int(3));
    // V - E + F = 2 - 2g with six edges and one body in genus 2.
    assert_eq!(s.vertex_classes(), 3);
    assert!(s.staples.iter().all(|m| m.p.v.norm2().is_one()));
    let unit = rescale_unit_area(&s);
    assert!(unit.area.is_one());
    assert_eq!(unit.applied_scale, root(3).recip().unwrap());
    assert_eq!(rescale_unit_area(&unit), unit);
}

#[test]
fn square_torus_fixture() {
    let torus: StratumSig = "0".parse().unwrap();
    let uni = [
        MarkedPair::new(ConePoint::ints(0, 0, 1, 0), ConePoint::ints(0, 0, -1, 0)),
        MarkedPair::new(ConePoint::ints(0, 0, 0, 1), ConePoint::ints(0, 0, 0, -1)),
    ];
    let s = build_surface(&torus, &uni).unwrap();
    assert_eq!(s.staples.len(), 2);
    assert!(s.area.is_one());
    assert_eq!(s.vertex_classes(), 1);
    assert_eq!(rescale_unit_area(&s), s);
}

#[test]
fn dropping_the_red_orbit_breaks_translation() {
    // Every essential point still finds an essential mate, but the glued
    // edges no longer differ by the staple vectors.
    let uni = universe(4, [true, false, true]);
    let pts: Vec<ConePoint> = uni.iter().flat_map(|m| [m.p.clone(), m.mate.clone()]).collect();
    let body = convex_body_pruned(&o2(), 0, &pts).unwrap();
    assert_eq!(body.supports.len(), 16);
    let pairing = pair_essentials(std::slice::from_ref(&body), &uni).unwrap();
    assert_eq!(pairing.staples.len(), 8);
    assert!(matches!(
        glue(&o2(), &[body], &pairing),
        Err(GlueError::NotTranslates(_))
    ));
}

#[test]
fn fixture_verifies_for_both_generators() {
    let s = fixture();
    for depth in [5, 6] {
        let report = verify_all(&o2(), &s, &gens(), &universe(depth, [true; 3]), depth);
        assert!(report.verified, "depth {depth}");
    }
    let t2 = verify_all(&o2(), &s, &[Mat2::t_pow(2)], &universe(5, [true; 3]), 5);
    assert!(matches!(t2.generators[0].1, GeneratorStatus::Verified { .. }));
}

#[test]
fn seed_universe_is_too_small_to_verify() {
    let s = fixture();
    let report = verify_all(&o2(), &s, &gens(), &universe(0, [true; 3]), 0);
    assert!(!report.verified);
    assert!(matches!(report.generators[0].1, GeneratorStatus::Unknown { depth: 0 }));
}

/// Rotates mates among pairs that share a first point vector.
fn swap_mates(uni: &[MarkedPair]) -> Vec<MarkedPair> {
    let mut groups: BTreeMap<Vec2, Vec<usize>> = BTreeMap::new();
    let oriented: Vec<MarkedPair> = uni.iter().map(MarkedPair::canonical).collect();
    for (i, m) in oriented.iter().enumerate() {
        groups.entry(m.p.v.clone()).or_default().push(i);
    }
    let mut out = oriented.clone();
    for ids in groups.values() {
        for (k, &i) in ids.iter().enumerate() {
            let j = ids[(k + 1) % ids.len()];
            out[i] = MarkedPair::new(oriented[i].p.clone(), oriented[j].mate.clone());
        }
    }
    out
}

type Breaker = dyn Fn(&[MarkedPair]) -> Vec<MarkedPair>;

#[test]
fn shuffled_mates_never_verify() {
    let s = fixture();
    let full = universe(5, [true; 3]);
    let shift = |uni: &[MarkedPair]| -> Vec<MarkedPair> {
        uni.iter()
            .map(|m| {
                let mut m = m.clone();
                m.mate.sector = (m.mate.sector + 1) % 3;
                m
            })
            .collect()
    };
    let breakers: [&Breaker; 2] = [&swap_mates, &shift];
    for breaker in breakers {
        let shuffled = breaker(&full);
        assert_ne!(
            shuffled.iter().map(MarkedPair::canonical).collect::<Vec<_>>(),
            full.iter().map(MarkedPair::canonical).collect::<Vec<_>>()
        );
        assert!(!verify_all(&o2(), &s, &gens(), &shuffled, 5).verified);
        let small = breaker(&universe(4, [true; 3]));
        if let Ok(t) = build_surface(&o2(), &small) {
            assert!(!verify_all(&o2(), &t, &gens(), &shuffled, 5).verified);
        }
    }
}

#[test]
fn records_round_trip_through_json() {
    let s = fixture();
    let text = serde_json::to_string(&s).unwrap();
    let back: TranslationSurface = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);

    let mut cfg = RunConfig::new(o2(), gens());
    cfg.depths = vec![4];
    let out = run(&cfg).unwrap();
    assert!(!out.surfaces.is_empty());
    for rec in &out.surfaces {
        let text = serde_json::to_string_pretty(rec).unwrap();
        let back: SurfaceRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, rec);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }
}

#[test]
fn runs_are_deterministic() {
    let torus: StratumSig = "0".parse().unwrap();
    let cfg = RunConfig::new(torus, vec![Mat2::s(), Mat2::t_pow(1)]);
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    assert_eq!(a.report, b.report);
    assert_eq!(a.surfaces, b.surfaces);
    assert_eq!(a.surfaces.len(), 1);
}
