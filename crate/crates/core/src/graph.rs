//! Simulation graphs and consistent scalars.
//!
//! Each triple fixes the ratios between the scalars of its three
//! simulations, so on a connected graph a single anchor determines all
//! scalars. Extra triples only need checking.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::triple::TripleMatch;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimGraph {
    pub vertices: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
    pub triples: Vec<TripleMatch>,
    /// Edge to the indices of triples supporting it.
    pub triple_index: BTreeMap<(usize, usize), Vec<usize>>,
}

fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

pub fn build_graph(p: &[TripleMatch]) -> SimGraph {
    let mut g = SimGraph {
        triples: p.to_vec(),
        ..SimGraph::default()
    };
    let mut verts = BTreeSet::new();
    for (k, t) in p.iter().enumerate() {
        verts.extend(t.sims);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let (a, b) = (t.sims[i], t.sims[j]);
            if a != b {
                g.edges.insert(edge(a, b));
                g.triple_index.entry(edge(a, b)).or_default().push(k);
            }
        }
    }
    g.vertices = verts.into_iter().collect();
    g
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarAssignment {
    pub anchor: Option<usize>,
    pub scalars: BTreeMap<usize, Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarOutcome {
    Consistent(ScalarAssignment),
    /// The indexed triple disagrees with the propagated scalars.
    Inconsistent {
        triple: usize,
    },
    Disconnected,
}

/// True iff the triple's scalars are proportional to the assignment.
pub fn triple_consistent(t: &TripleMatch, values: &BTreeMap<usize, Scalar>) -> bool {
    let v: Vec<&Scalar> = t.sims.iter().map(|s| &values[s]).collect();
    (1..3).all(|k| v[k] * &t.scalars[0] == v[0] * &t.scalars[k])
}

pub fn find_consistent_scalars(g: &SimGraph) -> ScalarOutcome {
    let Some(&anchor) = g.vertices.first() else {
        return ScalarOutcome::Consistent(ScalarAssignment::default());
    };
    let mut values: BTreeMap<usize, Scalar> = BTreeMap::new();
    values.insert(anchor, Scalar::one());
    let mut queue = VecDeque::from([anchor]);
    while let Some(x) = queue.pop_front() {
        // Neighbors in vertex order; each supporting triple fixes the ratio.
        for &y in &g.vertices {
            if x == y || values.contains_key(&y) {
                continue;
            }
            let Some(ts) = g.triple_index.get(&edge(x, y)) else {
                continue;
            };
            let t = &g.triples[ts[0]];
            let ix = t.sims.iter().position(|&s| s == x).expect("edge member");
            let iy = t.sims.iter().position(|&s| s == y).expect("edge member");
            let vy = &(&values[&x] * &t.scalars[iy]) / &t.scalars[ix];
            values.insert(y, vy);
            queue.push_back(y);
        }
    }
    if values.len() != g.vertices.len() {
        return ScalarOutcome::Disconnected;
    }
    for (k, t) in g.triples.iter().enumerate() {
        if !triple_consistent(t, &values) {
            return ScalarOutcome::Inconsistent { triple: k };
        }
    }
    ScalarOutcome::Consistent(ScalarAssignment {
        anchor: Some(anchor),
        scalars: values,
    })
}

/// Rescales so the least vertex carries 1.
fn normalize(mut a: BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
    if let Some(first) = a.values().next().cloned() {
        for v in a.values_mut() {
            *v = &*v / &first;
        }
    }
    a
}

/// Union of two assignments agreeing up to scale on a nonempty overlap.
fn merge(a: &BTreeMap<usize, Scalar>, b: &BTreeMap<usize, Scalar>) -> Option<BTreeMap<usize, Scalar>> {
    let common: Vec<usize> = a.keys().filter(|k| b.contains_key(k)).copied().collect();
    let &c0 = common.first()?;
    let factor = &a[&c0] / &b[&c0];
    for c in &common[1..] {
        if a[c] != &b[c] * &factor {
            return None;
        }
    }
    let mut out = a.clone();
    for (k, v) in b {
        out.entry(*k).or_insert_with(|| v * &factor);
    }
    Some(normalize(out))
}

/// A candidate subset: the simulations used and their scalars, together
/// with every matched triple consistent with them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub scalars: BTreeMap<usize, Scalar>,
    pub triples: Vec<usize>,
}

/// Connected consistent unions of single-triple assignments with at most
/// `cap` simulations, largest first. At most `limit` candidates are kept.
pub fn candidate_sets(matches: &[TripleMatch], cap: usize, limit: usize) -> (Vec<Candidate>, bool) {
    let mut keys: BTreeSet<Vec<(usize, Scalar)>> = BTreeSet::new();
    let mut list: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    let mut truncated = false;
    for t in matches {
        let g = build_graph(std::slice::from_ref(t));
        if let ScalarOutcome::Consistent(a) = find_consistent_scalars(&g) {
            if a.scalars.len() <= cap && keys.insert(a.scalars.clone().into_iter().collect()) {
                list.push(a.scalars);
            }
        }
    }
    // Close under pairwise merging.
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            if list.len() >= limit {
                truncated = true;
                break;
            }
            if let Some(m) = merge(&list[i], &list[j]) {
                if m.len() <= cap && keys.insert(m.clone().into_iter().collect()) {
                    list.push(m);
                }
            }
        }
        i += 1;
    }
    let mut out: Vec<Candidate> = list
        .into_iter()
        .map(|scalars| {
            let triples = matches
                .iter()
                .enumerate()
                .filter(|(_, t)| t.sims.iter().all(|s| scalars.contains_key(s)) && triple_consistent(t, &scalars))
                .map(|(k, _)| k)
                .collect();
            Candidate { scalars, triples }
        })
        .collect();
    out.sort_by(|a, b| {
        b.scalars
            .len()
            .cmp(&a.scalars.len())
            .then_with(|| a.scalars.iter().cmp(b.scalars.iter()))
    });
    (out, truncated)
}
