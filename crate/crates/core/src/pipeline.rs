//! The end-to-end search: directions, simulations, triples, candidate
//! scalars, bodies, gluing, verification and deduplication.
//!
//! Everything runs sequentially in a fixed order, so identical configs give
//! identical outputs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::body::{convex_body_pruned, ConvexBody};
use crate::builder::{canonical_form, glue, pair_essentials, rescale_unit_area, TranslationSurface};
use crate::cone::{ConePoint, MarkedPair, StratumSig};
use crate::direction::{theta_superset, DirectionSet, ThetaResult};
use crate::error::{ConfigError, GeomError};
use crate::graph::{candidate_sets, Candidate};
use crate::linalg::Mat2;
use crate::scalar::Scalar;
use crate::simulation::{enumerate_descriptors, CosetPolicy, SimCatalog, SimClass, SimDescriptor};
use crate::triple::{oriented_short, possible_triples, refute_by_balls, triple_universe, Refutation, TripleMatch};
use crate::verify::{verify_all, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub stratum: StratumSig,
    pub generators: Vec<Mat2>,
    pub theta_words: usize,
    pub depths: Vec<usize>,
    pub coset_policy: CosetPolicy,
    /// Most simulations in one candidate subset.
    pub subset_cap: usize,
    /// Most candidate subsets kept per depth.
    pub candidate_limit: usize,
    /// Drop triples refuted by a point inside one of their balls.
    pub prune_balls: bool,
    /// Only pairs with `|p|² ≤ triple_radius²` enter the triple search.
    pub triple_radius: Scalar,
}

impl RunConfig {
    pub fn new(stratum: StratumSig, generators: Vec<Mat2>) -> Self {
        RunConfig {
            stratum,
            generators,
            theta_words: 4,
            depths: vec![4, 6, 8],
            coset_policy: CosetPolicy::Identity,
            subset_cap: 8,
            candidate_limit: 4096,
            prune_balls: false,
            triple_radius: Scalar::from_int(2),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (i, g) in self.generators.iter().enumerate() {
            if !g.det().is_one() {
                return Err(ConfigError::GeneratorDet(i));
            }
        }
        if self.generators.is_empty() {
            return Err(ConfigError::Other("at least one generator is required".into()));
        }
        if self.depths.is_empty() || self.depths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::BadSchedule);
        }
        if self.theta_words == 0 || self.subset_cap == 0 || self.candidate_limit == 0 {
            return Err(ConfigError::Other(
                "word length, subset cap and limit must be positive".into(),
            ));
        }
        if !self.triple_radius.is_positive() {
            return Err(ConfigError::Other("triple radius must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("directions not covered with words of length at most {word_len}")]
    NotCovered { word_len: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

pub fn theta_stage(cfg: &RunConfig) -> Result<DirectionSet, RunError> {
    match theta_superset(&cfg.generators, cfg.theta_words)? {
        ThetaResult::Covered(d) => Ok(d),
        ThetaResult::NotCovered { word_len } => Err(RunError::NotCovered { word_len }),
    }
}

pub fn catalog(cfg: &RunConfig, theta: &DirectionSet) -> SimCatalog {
    let ds = enumerate_descriptors(&cfg.stratum, &theta.dirs, cfg.generators.len(), cfg.coset_policy);
    SimCatalog::new(&cfg.stratum, &cfg.generators, ds)
}

/// Triples found at one depth.
#[derive(Clone, Debug)]
pub struct TripleStage {
    pub classes: Vec<SimClass>,
    pub matches: Vec<TripleMatch>,
    pub refuted: usize,
}

/// Runs the triple search over distinctive simulations sharing twists.
pub fn triple_stage(cfg: &RunConfig, cat: &mut SimCatalog, depth: usize) -> Result<TripleStage, RunError> {
    let sig = cfg.stratum.clone();
    let classes = cat.classify(depth)?;
    let r2 = cfg.triple_radius.square();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut twist_ids: Vec<(Vec<crate::cone::TransElem>, usize)> = Vec::new();
    let mut short: BTreeMap<usize, Vec<MarkedPair>> = BTreeMap::new();
    for c in classes.iter().filter(|c| c.distinctive) {
        let o = cat.orbit(c.rep, depth)?;
        short.insert(c.rep, oriented_short(&o.pairs_at(depth), Some(&r2)));
        let tw = &cat.descriptors[c.rep].twists;
        let gid = match twist_ids.iter().find(|(t, _)| t == tw) {
            Some((_, g)) => *g,
            None => {
                twist_ids.push((tw.clone(), twist_ids.len()));
                twist_ids.len() - 1
            }
        };
        groups.entry(gid).or_default().push(c.rep);
    }
    let mut matches = Vec::new();
    let mut refuted = 0;
    for reps in groups.values() {
        for &a in reps {
            for &b in reps {
                for &c in reps {
                    for t in possible_triples(&sig, (a, &short[&a]), (b, &short[&b]), (c, &short[&c])) {
                        if cfg.prune_balls {
                            let orbits = [a, b, c].map(|i| cat.cached(i).expect("expanded").pairs_at(depth));
                            let uni = triple_universe(&t, [&orbits[0], &orbits[1], &orbits[2]]);
                            if let Refutation::Refuted { .. } = refute_by_balls(&sig, &t, &uni) {
                                refuted += 1;
                                continue;
                            }
                        }
                        matches.push(t);
                    }
                }
            }
        }
    }
    Ok(TripleStage {
        classes,
        matches,
        refuted,
    })
}

/// How one candidate subset ended.
#[derive(Clone, Debug)]
pub enum CandidateOutcome {
    Unbounded,
    Mismatch,
    GlueFailed,
    Unverified(Box<TranslationSurface>),
    Verified(Box<TranslationSurface>, VerificationReport),
}

/// Candidate scalars rescaled so the smallest is 1.
pub fn min_one(cand: &Candidate) -> BTreeMap<usize, Scalar> {
    let Some(m) = cand.scalars.values().min().cloned() else {
        return BTreeMap::new();
    };
    cand.scalars.iter().map(|(&i, r)| (i, r / &m)).collect()
}

/// The union of the scaled simulations of a candidate at `depth`.
pub fn candidate_universe(cat: &mut SimCatalog, cand: &Candidate, depth: usize) -> Result<Vec<MarkedPair>, RunError> {
    let mut out = Vec::new();
    for (&i, r) in &min_one(cand) {
        out.extend(cat.orbit(i, depth)?.pairs_at(depth).iter().map(|m| m.scaled(r)));
    }
    Ok(out)
}

pub fn build_surface(sig: &StratumSig, universe: &[MarkedPair]) -> Result<TranslationSurface, CandidateOutcome> {
    let mut bodies: Vec<ConvexBody> = Vec::new();
    for comp in 0..sig.kappa() {
        let pts: Vec<ConePoint> = universe
            .iter()
            .flat_map(|m| [&m.p, &m.mate])
            .filter(|p| p.comp == comp)
            .cloned()
            .collect();
        bodies.push(convex_body_pruned(sig, comp, &pts).map_err(|_| CandidateOutcome::Unbounded)?);
    }
    let pairing = pair_essentials(&bodies, universe).map_err(|_| CandidateOutcome::Mismatch)?;
    glue(sig, &bodies, &pairing).map_err(|_| CandidateOutcome::GlueFailed)
}

pub fn try_candidate(
    cfg: &RunConfig,
    cat: &mut SimCatalog,
    cand: &Candidate,
    depth: usize,
) -> Result<CandidateOutcome, RunError> {
    let uni = candidate_universe(cat, cand, depth)?;
    let surface = match build_surface(&cfg.stratum, &uni) {
        Ok(s) => s,
        Err(o) => return Ok(o),
    };
    let next = candidate_universe(cat, cand, depth + 1)?;
    let report = verify_all(&cfg.stratum, &surface, &cfg.generators, &next, depth + 1);
    Ok(if report.verified {
        CandidateOutcome::Verified(Box::new(surface), report)
    } else {
        CandidateOutcome::Unverified(Box::new(surface))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimUse {
    pub descriptor: SimDescriptor,
    pub scalar: Scalar,
}

/// A verified surface with how it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceRecord {
    pub canonical: String,
    pub depth: usize,
    pub generators: Vec<Mat2>,
    pub simulations: Vec<SimUse>,
    pub pre_rescale: TranslationSurface,
    pub surface: TranslationSurface,
    pub verification: VerificationReport,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub depth: usize,
    pub classes: usize,
    pub distinctive: usize,
    pub triples: usize,
    pub refuted: usize,
    pub candidates: usize,
    pub truncated: bool,
    pub skipped: usize,
    pub unbounded: usize,
    pub mismatched: usize,
    pub glue_failed: usize,
    pub unverified: usize,
    pub verified: usize,
    pub new_surfaces: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub stratum: StratumSig,
    pub generators: Vec<Mat2>,
    pub theta_word_len: usize,
    pub theta_directions: Vec<String>,
    pub descriptors: usize,
    pub depths: Vec<DepthReport>,
    pub surfaces: usize,
    pub status: String,
}

pub const NO_CANDIDATES: &str = "no candidates at schedule";

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: RunReport,
    pub surfaces: Vec<SurfaceRecord>,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    cfg.validate()?;
    let theta = theta_stage(cfg)?;
    let mut cat = catalog(cfg, &theta);
    let mut depths = Vec::new();
    let mut found: BTreeMap<String, SurfaceRecord> = BTreeMap::new();
    let mut done: BTreeSet<Vec<usize>> = BTreeSet::new();
    for &depth in &cfg.depths {
        let stage = triple_stage(cfg, &mut cat, depth)?;
        let (cands, truncated) = candidate_sets(&stage.matches, cfg.subset_cap, cfg.candidate_limit);
        let mut rep = DepthReport {
            depth,
            classes: stage.classes.len(),
            distinctive: stage.classes.iter().filter(|c| c.distinctive).count(),
            triples: stage.matches.len(),
            refuted: stage.refuted,
            candidates: cands.len(),
            truncated,
            ..DepthReport::default()
        };
        for cand in &cands {
            let key: Vec<usize> = cand.scalars.keys().copied().collect();
            if done.iter().any(|d| key.iter().all(|k| d.contains(k))) {
                rep.skipped += 1;
                continue;
            }
            match try_candidate(cfg, &mut cat, cand, depth)? {
                CandidateOutcome::Unbounded => rep.unbounded += 1,
                CandidateOutcome::Mismatch => rep.mismatched += 1,
                CandidateOutcome::GlueFailed => rep.glue_failed += 1,
                CandidateOutcome::Unverified(_) => rep.unverified += 1,
                CandidateOutcome::Verified(pre, verification) => {
                    rep.verified += 1;
                    done.insert(key);
                    let surface = rescale_unit_area(&pre);
                    let canonical = canonical_form(&surface);
                    if found.contains_key(&canonical) {
                        continue;
                    }
                    rep.new_surfaces += 1;
                    let simulations = min_one(cand)
                        .iter()
                        .map(|(&i, r)| SimUse {
                            descriptor: cat.descriptors[i].clone(),
                            scalar: r.clone(),
                        })
                        .collect();
                    found.insert(
                        canonical.clone(),
                        SurfaceRecord {
                            canonical,
                            depth,
                            generators: cfg.generators.clone(),
                            simulations,
                            pre_rescale: *pre,
                            surface,
                            verification,
                        },
                    );
                }
            }
        }
        depths.push(rep);
    }
    let surfaces: Vec<SurfaceRecord> = found.into_values().collect();
    let report = RunReport {
        stratum: cfg.stratum.clone(),
        generators: cfg.generators.clone(),
        theta_word_len: theta.word_len,
        theta_directions: theta.dirs.iter().map(ToString::to_string).collect(),
        descriptors: cat.descriptors.len(),
        depths,
        surfaces: surfaces.len(),
        status: if surfaces.is_empty() {
            NO_CANDIDATES.to_string()
        } else {
            "surfaces found".to_string()
        },
    };
    Ok(RunOutput { report, surfaces })
}

/// Rebuilds the universe of a stored record at `depth`.
pub fn record_universe(rec: &SurfaceRecord, depth: usize) -> Result<Vec<MarkedPair>, RunError> {
    let sig = &rec.surface.stratum;
    let ds: Vec<SimDescriptor> = rec.simulations.iter().map(|u| u.descriptor.clone()).collect();
    let mut cat = SimCatalog::new(sig, &rec.generators, ds);
    let scalars = rec
        .simulations
        .iter()
        .enumerate()
        .map(|(i, u)| (i, u.scalar.clone()))
        .collect();
    let cand = Candidate {
        scalars,
        triples: Vec::new(),
    };
    candidate_universe(&mut cat, &cand, depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let g: StratumSig = "0".parse().unwrap();
        let mut c = RunConfig::new(g.clone(), vec![Mat2::s(), Mat2::t_pow(1)]);
        assert!(c.validate().is_ok());
        c.depths = vec![4, 4];
        assert!(matches!(c.validate(), Err(ConfigError::BadSchedule)));
        let c = RunConfig::new(g, vec![Mat2::ints(2, 0, 0, 1)]);
        assert!(matches!(c.validate(), Err(ConfigError::GeneratorDet(0))));
    }

    #[test]
    fn square_torus_run() {
        let g: StratumSig = "0".parse().unwrap();
        let mut c = RunConfig::new(g, vec![Mat2::s(), Mat2::t_pow(1)]);
        c.depths = vec![3];
        let out = run(&c).unwrap();
        assert_eq!(out.surfaces.len(), 1);
        let s = &out.surfaces[0].surface;
        assert_eq!(s.area, Scalar::one());
        assert_eq!(s.bodies[0].len(), 4);
        assert!(out.surfaces[0].verification.verified);
    }

    #[test]
    fn not_covered() {
        let g: StratumSig = "0".parse().unwrap();
        let c = RunConfig::new(g, vec![Mat2::s()]);
        assert!(matches!(run(&c), Err(RunError::NotCovered { .. })));
    }
}
