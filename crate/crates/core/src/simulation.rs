//! Simulations: orbits of a unit antipodal pair under the group generated by
//! the twisted canonical maps `τₙ∘f_{Aₙ}`, truncated by word length.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cone::{enumerate_trans, CanonicalMap, ConePoint, MarkedPair, StratumSig, TransElem};
use crate::error::GeomError;
use crate::linalg::{Mat2, Vec2};
use crate::scalar::Scalar;

/// Which coset sets `{τ'ₘ}` descriptors range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CosetPolicy {
    #[default]
    Identity,
    Singletons,
    PowerSet,
}

impl std::str::FromStr for CosetPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(CosetPolicy::Identity),
            "singletons" => Ok(CosetPolicy::Singletons),
            "power-set" => Ok(CosetPolicy::PowerSet),
            _ => Err(format!("unknown coset policy {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimDescriptor {
    pub direction: Vec2,
    /// `(component, sector)` of the seed point.
    pub p_sector: (usize, u32),
    /// `(component, sector)` of its mate.
    pub mate_sector: (usize, u32),
    /// One twist per generator.
    pub twists: Vec<TransElem>,
    pub cosets: Vec<TransElem>,
}

impl SimDescriptor {
    pub fn base_pair(&self) -> MarkedPair {
        MarkedPair::new(
            ConePoint::new(self.p_sector.0, self.p_sector.1, self.direction.clone()),
            ConePoint::new(self.mate_sector.0, self.mate_sector.1, -&self.direction),
        )
    }

    pub fn has_identity_cosets(&self) -> bool {
        self.cosets.len() == 1 && self.cosets[0].is_identity()
    }
}

impl fmt::Display for SimDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tw: Vec<String> = self.twists.iter().map(|t| format!("{:?}", t.rot)).collect();
        write!(
            f,
            "dir={} p=c{}.{} mate=c{}.{} twists=[{}] cosets={}",
            self.direction,
            self.p_sector.0,
            self.p_sector.1,
            self.mate_sector.0,
            self.mate_sector.1,
            tw.join(" "),
            self.cosets.len()
        )
    }
}

fn coset_sets(trans: &[TransElem], policy: CosetPolicy) -> Vec<Vec<TransElem>> {
    match policy {
        CosetPolicy::Identity => vec![vec![trans[0].clone()]],
        CosetPolicy::Singletons => trans.iter().map(|t| vec![t.clone()]).collect(),
        CosetPolicy::PowerSet => {
            let n = trans.len().min(16);
            (1u32..(1 << n))
                .map(|mask| {
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| trans[i].clone())
                        .collect()
                })
                .collect()
        }
    }
}

/// The finite product of directions, sector pairs, twist tuples and coset
/// sets, in that nesting order.
pub fn enumerate_descriptors(
    sig: &StratumSig,
    theta: &[Vec2],
    n_gens: usize,
    policy: CosetPolicy,
) -> Vec<SimDescriptor> {
    let trans = enumerate_trans(sig);
    let sectors = sig.all_sectors();
    let mut tuples: Vec<Vec<TransElem>> = vec![Vec::new()];
    for _ in 0..n_gens {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                trans.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    let cosets = coset_sets(&trans, policy);
    let mut out = Vec::new();
    for dir in theta {
        for &ps in &sectors {
            for &ms in &sectors {
                for tw in &tuples {
                    for cs in &cosets {
                        out.push(SimDescriptor {
                            direction: dir.clone(),
                            p_sector: ps,
                            mate_sector: ms,
                            twists: tw.clone(),
                            cosets: cs.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// `g = τ∘f_A` together with its inverse `f_A⁻¹∘τ⁻¹`.
#[derive(Clone, Debug)]
pub struct TwistedMap {
    map: CanonicalMap,
    twist: TransElem,
    twist_inv: TransElem,
}

impl TwistedMap {
    pub fn new(sig: &StratumSig, a: &Mat2, twist: &TransElem) -> Result<Self, GeomError> {
        Ok(TwistedMap {
            map: CanonicalMap::new(a)?,
            twist: twist.clone(),
            twist_inv: twist.inverse(sig),
        })
    }

    pub fn apply(&self, sig: &StratumSig, p: &ConePoint) -> ConePoint {
        self.twist.apply(sig, &self.map.apply(sig, p))
    }

    pub fn apply_inv(&self, sig: &StratumSig, p: &ConePoint) -> ConePoint {
        self.map.apply_inv(sig, &self.twist_inv.apply(sig, p))
    }
}

/// A depth-truncated orbit, grown incrementally.
#[derive(Clone, Debug)]
pub struct SimOrbit {
    pub descriptor: SimDescriptor,
    sig: StratumSig,
    maps: Vec<TwistedMap>,
    /// Group orbit in discovery order; canonical representatives.
    core: Vec<MarkedPair>,
    index: HashSet<MarkedPair>,
    /// `core[..layer_ends[k]]` is the orbit truncated at word length `k`.
    layer_ends: Vec<usize>,
}

impl SimOrbit {
    pub fn new(sig: &StratumSig, gens: &[Mat2], d: &SimDescriptor) -> Result<Self, GeomError> {
        let maps = gens
            .iter()
            .zip(&d.twists)
            .map(|(a, t)| TwistedMap::new(sig, a, t))
            .collect::<Result<Vec<_>, _>>()?;
        let base = d.base_pair().canonical();
        let mut index = HashSet::new();
        index.insert(base.clone());
        Ok(SimOrbit {
            descriptor: d.clone(),
            sig: sig.clone(),
            maps,
            core: vec![base],
            index,
            layer_ends: vec![1],
        })
    }

    pub fn depth(&self) -> usize {
        self.layer_ends.len() - 1
    }

    pub fn expand_to(&mut self, depth: usize) {
        while self.depth() < depth {
            let start = if self.layer_ends.len() >= 2 {
                self.layer_ends[self.layer_ends.len() - 2]
            } else {
                0
            };
            let end = *self.layer_ends.last().expect("nonempty");
            for k in start..end {
                for m in &self.maps {
                    for inv in [false, true] {
                        let img = self.core[k].map(|p| {
                            if inv {
                                m.apply_inv(&self.sig, p)
                            } else {
                                m.apply(&self.sig, p)
                            }
                        });
                        let img = img.canonical();
                        if !self.index.contains(&img) {
                            self.index.insert(img.clone());
                            self.core.push(img);
                        }
                    }
                }
            }
            self.layer_ends.push(self.core.len());
        }
    }

    /// The group orbit truncated at word length `depth ≤ self.depth()`.
    pub fn core_at(&self, depth: usize) -> &[MarkedPair] {
        &self.core[..self.layer_ends[depth.min(self.depth())]]
    }

    /// Whether the truncated group orbit contains the pair (either order).
    pub fn core_contains(&self, m: &MarkedPair) -> bool {
        self.index.contains(&m.canonical())
    }

    /// The simulation truncated at `depth`: the core pushed through every
    /// coset representative, deduplicated, in a deterministic order.
    pub fn pairs_at(&self, depth: usize) -> Vec<MarkedPair> {
        let core = self.core_at(depth);
        if self.descriptor.has_identity_cosets() {
            return core.to_vec();
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for t in &self.descriptor.cosets {
            for m in core {
                let img = t.apply_pair(&self.sig, m).canonical();
                if seen.insert(img.clone()) {
                    out.push(img);
                }
            }
        }
        out
    }

    pub fn pairs(&self) -> Vec<MarkedPair> {
        self.pairs_at(self.depth())
    }
}

/// No point occurs with two different mates.
pub fn is_distinctive(pairs: &[MarkedPair]) -> bool {
    let mut mates: HashMap<&ConePoint, &ConePoint> = HashMap::new();
    for m in pairs {
        for (a, b) in [(&m.p, &m.mate), (&m.mate, &m.p)] {
            if let Some(prev) = mates.insert(a, b) {
                if prev != b {
                    return false;
                }
            }
        }
    }
    true
}

/// Expand a single descriptor to `depth`.
pub fn expand(sig: &StratumSig, gens: &[Mat2], d: &SimDescriptor, depth: usize) -> Result<SimOrbit, GeomError> {
    let mut o = SimOrbit::new(sig, gens, d)?;
    o.expand_to(depth);
    Ok(o)
}

/// One equivalence class of descriptors sharing a simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimClass {
    pub rep: usize,
    pub aliases: Vec<usize>,
    pub distinctive: bool,
}

/// All descriptors of a run together with lazily grown orbits.
pub struct SimCatalog {
    pub sig: StratumSig,
    pub gens: Vec<Mat2>,
    pub descriptors: Vec<SimDescriptor>,
    orbits: BTreeMap<usize, SimOrbit>,
}

impl SimCatalog {
    pub fn new(sig: &StratumSig, gens: &[Mat2], descriptors: Vec<SimDescriptor>) -> Self {
        SimCatalog {
            sig: sig.clone(),
            gens: gens.to_vec(),
            descriptors,
            orbits: BTreeMap::new(),
        }
    }

    /// The orbit of descriptor `i`, expanded to at least `depth`.
    pub fn orbit(&mut self, i: usize, depth: usize) -> Result<&SimOrbit, GeomError> {
        if !self.orbits.contains_key(&i) {
            let o = SimOrbit::new(&self.sig, &self.gens, &self.descriptors[i])?;
            self.orbits.insert(i, o);
        }
        let o = self.orbits.get_mut(&i).expect("inserted");
        o.expand_to(depth);
        Ok(o)
    }

    /// Read access to an orbit already expanded.
    pub fn cached(&self, i: usize) -> Option<&SimOrbit> {
        self.orbits.get(&i)
    }

    /// Groups descriptors whose simulations coincide. A descriptor with the
    /// identity coset set whose seed already occurs in the truncated orbit of
    /// an earlier representative with the same twists generates the same
    /// orbit, so it is recorded as an alias and never expanded.
    pub fn classify(&mut self, depth: usize) -> Result<Vec<SimClass>, GeomError> {
        let mut classes: Vec<SimClass> = Vec::new();
        let mut by_twists: HashMap<Vec<TransElem>, Vec<usize>> = HashMap::new();
        for i in 0..self.descriptors.len() {
            let d = &self.descriptors[i];
            let mut alias_of = None;
            if d.has_identity_cosets() {
                let seed = d.base_pair();
                if let Some(cands) = by_twists.get(&d.twists) {
                    for &ci in cands {
                        let rep = classes[ci].rep;
                        if self.orbits[&rep].core_contains(&seed) {
                            alias_of = Some(ci);
                            break;
                        }
                    }
                }
            }
            match alias_of {
                Some(ci) => classes[ci].aliases.push(i),
                None => {
                    let o = self.orbit(i, depth)?;
                    let distinctive = is_distinctive(&o.pairs_at(depth));
                    let twists = self.descriptors[i].twists.clone();
                    if self.descriptors[i].has_identity_cosets() {
                        by_twists.entry(twists).or_default().push(classes.len());
                    }
                    classes.push(SimClass {
                        rep: i,
                        aliases: Vec::new(),
                        distinctive,
                    });
                }
            }
        }
        Ok(classes)
    }
}

/// Every pair of the orbits `(i, r)` scaled by `r`.
pub fn scaled_pairs(pairs: &[MarkedPair], r: &Scalar) -> Vec<MarkedPair> {
    pairs.iter().map(|m| m.scaled(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direction::{theta_superset, ThetaResult};

    fn o2() -> StratumSig {
        "2".parse().unwrap()
    }

    fn rho(k: u32) -> TransElem {
        TransElem {
            perm: vec![0],
            rot: vec![k],
        }
    }

    fn cyan() -> SimDescriptor {
        SimDescriptor {
            direction: Vec2::ints(1, 0),
            p_sector: (0, 0),
            mate_sector: (0, 2),
            twists: vec![rho(2), rho(0)],
            cosets: vec![rho(0)],
        }
    }

    fn gens() -> Vec<Mat2> {
        vec![Mat2::s(), Mat2::t_pow(2)]
    }

    #[test]
    fn descriptor_counts() {
        let ThetaResult::Covered(th) = theta_superset(&gens(), 3).unwrap() else {
            panic!()
        };
        assert_eq!(th.dirs.len(), 8);
        assert_eq!(
            enumerate_descriptors(&o2(), &th.dirs, 2, CosetPolicy::Identity).len(),
            648
        );
        let torus: StratumSig = "0".parse().unwrap();
        let four = [Vec2::ints(1, 0), Vec2::ints(0, 1), Vec2::ints(-1, 0), Vec2::ints(0, -1)];
        assert_eq!(enumerate_descriptors(&torus, &four, 2, CosetPolicy::Identity).len(), 4);
        assert!(enumerate_descriptors(&o2(), &[], 2, CosetPolicy::Identity).is_empty());
        assert_eq!(
            enumerate_descriptors(&o2(), &four, 1, CosetPolicy::PowerSet).len(),
            4 * 9 * 3 * 7
        );
    }

    #[test]
    fn depth_zero_is_seed() {
        let o = expand(&o2(), &gens(), &cyan(), 0).unwrap();
        assert_eq!(o.pairs(), vec![cyan().base_pair().canonical()]);
    }

    #[test]
    fn cyan_orbit_contents() {
        let o = expand(&o2(), &gens(), &cyan(), 3).unwrap();
        let p = |c, s, x, y| ConePoint::ints(c, s, x, y);
        for (a, b) in [
            (p(0, 0, 1, 0), p(0, 2, -1, 0)),
            (p(0, 2, 0, 1), p(0, 1, 0, -1)),
            (p(0, 0, 0, -1), p(0, 0, 0, 1)),
        ] {
            assert!(o.core_contains(&MarkedPair::new(a, b)));
        }
        assert!(is_distinctive(&o.pairs()));
    }

    #[test]
    fn truncations_are_monotone() {
        let o = expand(&o2(), &gens(), &cyan(), 5).unwrap();
        for k in 0..5 {
            let small: HashSet<_> = o.core_at(k).iter().cloned().collect();
            let big: HashSet<_> = o.core_at(k + 1).iter().cloned().collect();
            assert!(small.is_subset(&big));
        }
    }

    #[test]
    fn distinctiveness() {
        let p = ConePoint::ints(0, 0, 1, 0);
        let a = ConePoint::ints(0, 1, -1, 0);
        let b = ConePoint::ints(0, 2, -1, 0);
        assert!(is_distinctive(&[MarkedPair::new(p.clone(), a.clone())]));
        assert!(!is_distinctive(&[MarkedPair::new(p.clone(), a), MarkedPair::new(p, b)]));
    }
}
