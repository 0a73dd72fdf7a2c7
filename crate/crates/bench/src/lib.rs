//! Shared inputs for the benchmarks.

use veech_core::simulation::SimDescriptor;
use veech_core::{Mat2, RunConfig, StratumSig, TransElem, Vec2};

pub fn h2() -> StratumSig {
    "2".parse().expect("valid")
}

/// `S` and `T²`.
pub fn theta_gens() -> Vec<Mat2> {
    vec![Mat2::s(), Mat2::t_pow(2)]
}

/// Search on `H(2)` with `S`, `T²` stopping after the first depth.
pub fn h2_config(depth: usize) -> RunConfig {
    let mut cfg = RunConfig::new(h2(), theta_gens());
    cfg.depths = vec![depth];
    cfg
}

pub fn torus_config() -> RunConfig {
    RunConfig::new("0".parse().expect("valid"), vec![Mat2::s(), Mat2::t_pow(1)])
}

/// Horizontal seed in sector 0 with its mate in sector 2.
pub fn horizontal_seed() -> SimDescriptor {
    let rot = |k| TransElem {
        perm: vec![0],
        rot: vec![k],
    };
    SimDescriptor {
        direction: Vec2::ints(1, 0),
        p_sector: (0, 0),
        mate_sector: (0, 2),
        twists: vec![rot(2), rot(0)],
        cosets: vec![rot(0)],
    }
}
