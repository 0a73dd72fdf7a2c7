//! The canonical cone surface: a disjoint union of cones of angle
//! `2π(dᵢ+1)`, its points, antipodal pairs and the maps acting on them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, FormatError, GeomError};
use crate::linalg::{arg_cmp_nz, Mat2, Vec2};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct StratumSig {
    orders: Vec<u32>,
}

impl StratumSig {
    pub fn new(mut orders: Vec<u32>) -> Result<Self, ConfigError> {
        if orders.is_empty() {
            return Err(ConfigError::EmptyStratum);
        }
        let sum: u32 = orders.iter().sum();
        if sum % 2 != 0 {
            return Err(ConfigError::OddStratum(sum));
        }
        orders.sort_unstable();
        Ok(StratumSig { orders })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn kappa(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self, comp: usize) -> u32 {
        self.orders[comp]
    }

    /// Number of sectors of component `comp`.
    pub fn sectors(&self, comp: usize) -> u32 {
        self.orders[comp] + 1
    }

    pub fn genus(&self) -> u32 {
        (self.orders.iter().sum::<u32>() + 2) / 2
    }

    /// All `(component, sector)` labels, component-major.
    pub fn all_sectors(&self) -> Vec<(usize, u32)> {
        (0..self.kappa())
            .flat_map(|i| (0..self.sectors(i)).map(move |j| (i, j)))
            .collect()
    }

    pub fn check_point(&self, p: &ConePoint) -> Result<(), GeomError> {
        if p.comp >= self.kappa() {
            return Err(GeomError::BadComponent(p.comp));
        }
        if p.sector >= self.sectors(p.comp) {
            return Err(GeomError::BadSector {
                comp: p.comp,
                sector: p.sector,
            });
        }
        if p.v.is_zero() {
            return Err(GeomError::ZeroVector);
        }
        Ok(())
    }
}

impl TryFrom<Vec<u32>> for StratumSig {
    type Error = ConfigError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        StratumSig::new(v)
    }
}

impl From<StratumSig> for Vec<u32> {
    fn from(s: StratumSig) -> Self {
        s.orders
    }
}

impl FromStr for StratumSig {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let orders = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ConfigError::BadStratum(s.to_string()))?;
        StratumSig::new(orders)
    }
}

impl fmt::Display for StratumSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A regular point of the cone surface. `comp` is 0-based; the total angle
/// of the point is `2π·sector + arg(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConePoint {
    pub comp: usize,
    pub sector: u32,
    pub v: Vec2,
}

impl ConePoint {
    pub fn new(comp: usize, sector: u32, v: Vec2) -> Self {
        ConePoint { comp, sector, v }
    }

    pub fn ints(comp: usize, sector: u32, x: i64, y: i64) -> Self {
        ConePoint::new(comp, sector, Vec2::ints(x, y))
    }

    /// `r·p`; `r` must be positive.
    pub fn scaled(&self, r: &Scalar) -> ConePoint {
        ConePoint::new(self.comp, self.sector, self.v.scale(r))
    }
}

/// Ordering by total angle within a component (components compared first).
pub fn total_angle_cmp(p: &ConePoint, q: &ConePoint) -> Ordering {
    p.comp
        .cmp(&q.comp)
        .then(p.sector.cmp(&q.sector))
        .then_with(|| arg_cmp_nz(&p.v, &q.v))
}

/// The sector of the point with vector `w` lying less than `π` from the
/// reference point `m`, in `m`'s component. Returns `None` if `w` is parallel
/// and opposite to `m.v`.
pub fn sector_near(sig: &StratumSig, m: &ConePoint, w: &Vec2) -> Option<u32> {
    let n = sig.sectors(m.comp);
    match m.v.cross(w).signum() {
        1 => {
            let wrap = arg_cmp_nz(w, &m.v) == Ordering::Less;
            Some((m.sector + u32::from(wrap)) % n)
        }
        -1 => {
            let wrap = arg_cmp_nz(w, &m.v) == Ordering::Greater;
            Some((m.sector + n - u32::from(wrap)) % n)
        }
        _ => m.v.dot(w).is_positive().then_some(m.sector),
    }
}

impl fmt::Display for ConePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.comp, self.sector, self.v.x, self.v.y)
    }
}

/// Splits `s` at top-level commas (outside parentheses).
pub(crate) fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for ConePoint {
    type Err = FormatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FormatError::BadPoint(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts = split_top(inner);
        if parts.len() != 4 {
            return Err(bad());
        }
        let comp = parts[0].trim().parse().map_err(|_| bad())?;
        let sector = parts[1].trim().parse().map_err(|_| bad())?;
        let x = parts[2].parse()?;
        let y = parts[3].parse()?;
        Ok(ConePoint::new(comp, sector, Vec2::new(x, y)))
    }
}

impl Serialize for ConePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ConePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An antipodal pair `{p, p°}` with `p°.v = −p.v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarkedPair {
    pub p: ConePoint,
    pub mate: ConePoint,
}

impl MarkedPair {
    pub fn new(p: ConePoint, mate: ConePoint) -> Self {
        MarkedPair { p, mate }
    }

    pub fn is_valid(&self) -> bool {
        !self.p.v.is_zero() && self.mate.v == -&self.p.v
    }

    /// The same pair with roles exchanged.
    pub fn swapped(&self) -> MarkedPair {
        MarkedPair::new(self.mate.clone(), self.p.clone())
    }

    /// Representative with the smaller member first.
    pub fn canonical(&self) -> MarkedPair {
        if self.p <= self.mate {
            self.clone()
        } else {
            self.swapped()
        }
    }

    pub fn scaled(&self, r: &Scalar) -> MarkedPair {
        MarkedPair::new(self.p.scaled(r), self.mate.scaled(r))
    }

    pub fn map(&self, f: impl Fn(&ConePoint) -> ConePoint) -> MarkedPair {
        MarkedPair::new(f(&self.p), f(&self.mate))
    }
}

impl fmt::Display for MarkedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.p, self.mate)
    }
}

/// A translation automorphism: permutes components of equal order and
/// rotates sectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TransElem {
    pub perm: Vec<usize>,
    pub rot: Vec<u32>,
}

impl TransElem {
    pub fn identity(sig: &StratumSig) -> Self {
        TransElem {
            perm: (0..sig.kappa()).collect(),
            rot: vec![0; sig.kappa()],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.rot.iter().all(|&r| r == 0)
    }

    pub fn apply(&self, sig: &StratumSig, p: &ConePoint) -> ConePoint {
        let comp = self.perm[p.comp];
        let n = sig.sectors(comp);
        ConePoint::new(comp, (p.sector + self.rot[comp]) % n, p.v.clone())
    }

    pub fn inverse(&self, sig: &StratumSig) -> TransElem {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        // τ⁻¹ sends (perm[i], s) to (i, s − rot[perm[i]]).
        let rot = (0..k)
            .map(|i| {
                let n = sig.sectors(i);
                (n - self.rot[self.perm[i]] % n) % n
            })
            .collect();
        TransElem { perm, rot }
    }

    /// `self ∘ other`.
    pub fn compose(&self, sig: &StratumSig, other: &TransElem) -> TransElem {
        let k = self.perm.len();
        let perm: Vec<usize> = (0..k).map(|i| self.perm[other.perm[i]]).collect();
        let mut rot = vec![0; k];
        for i in 0..k {
            let mid = other.perm[i];
            let fin = self.perm[mid];
            rot[fin] = (other.rot[mid] + self.rot[fin]) % sig.sectors(fin);
        }
        TransElem { perm, rot }
    }

    pub fn apply_pair(&self, sig: &StratumSig, m: &MarkedPair) -> MarkedPair {
        m.map(|p| self.apply(sig, p))
    }
}

impl fmt::Display for TransElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm={:?} rot={:?}", self.perm, self.rot)
    }
}

/// All translation automorphisms, identity first.
pub fn enumerate_trans(sig: &StratumSig) -> Vec<TransElem> {
    let k = sig.kappa();
    let mut perms = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; k];
    fn rec(sig: &StratumSig, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == used.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] && sig.order(j) == sig.order(i) {
                used[j] = true;
                cur.push(j);
                rec(sig, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(sig, &mut cur, &mut used, &mut perms);

    let mut rots: Vec<Vec<u32>> = vec![Vec::new()];
    for i in 0..k {
        rots = rots
            .into_iter()
            .flat_map(|r| {
                (0..sig.sectors(i)).map(move |s| {
                    let mut r = r.clone();
                    r.push(s);
                    r
                })
            })
            .collect();
    }
    let mut out = Vec::with_capacity(perms.len() * rots.len());
    for perm in &perms {
        for rot in &rots {
            out.push(TransElem {
                perm: perm.clone(),
                rot: rot.clone(),
            });
        }
    }
    out
}

/// The canonical affine map `f_A` for `det A > 0`.
///
/// The image of `p` in sector `j` lies in sector `j` or `j+1`; the sector
/// advances exactly when the image crosses the slit as the argument of `p`
/// sweeps `[0, 2π)` starting from the direction of `A·e₁`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalMap {
    a: Mat2,
    inv: Mat2,
    ae1: Vec2,
}

impl CanonicalMap {
    pub fn new(a: &Mat2) -> Result<Self, GeomError> {
        if !a.det().is_positive() {
            return Err(GeomError::DetNotPositive);
        }
        Ok(CanonicalMap {
            inv: a.inverse()?,
            ae1: a.col0(),
            a: a.clone(),
        })
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.a
    }

    fn carry(&self, w: &Vec2) -> u32 {
        u32::from(arg_cmp_nz(w, &self.ae1) == Ordering::Less)
    }

    pub fn apply(&self, sig: &StratumSig, p: &ConePoint) -> ConePoint {
        let w = self.a.apply(&p.v);
        let n = sig.sectors(p.comp);
        let s = (p.sector + self.carry(&w)) % n;
        ConePoint::new(p.comp, s, w)
    }

    pub fn apply_inv(&self, sig: &StratumSig, p: &ConePoint) -> ConePoint {
        let v = self.inv.apply(&p.v);
        let n = sig.sectors(p.comp);
        let s = (p.sector + n - self.carry(&p.v)) % n;
        ConePoint::new(p.comp, s, v)
    }

    pub fn apply_pair(&self, sig: &StratumSig, m: &MarkedPair) -> MarkedPair {
        m.map(|p| self.apply(sig, p))
    }
}

/// `f_A(p)` for a single point; errors if `det A ≤ 0`.
pub fn apply_canonical(sig: &StratumSig, a: &Mat2, p: &ConePoint) -> Result<ConePoint, GeomError> {
    Ok(CanonicalMap::new(a)?.apply(sig, p))
}

/// `r·p` for `r > 0`.
pub fn scale(r: &Scalar, p: &ConePoint) -> Result<ConePoint, GeomError> {
    if !r.is_positive() {
        return Err(GeomError::NonPositiveScale);
    }
    Ok(p.scaled(r))
}
