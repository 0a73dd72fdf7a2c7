//! Exact real numbers in a tower of real quadratic extensions of the rationals.
//!
//! Every value lives in `Q(√r₁)(√r₂)…(√r_k)` where each radicand `r_i` is a
//! positive element of the field below it that is not a square there. The
//! tower is global and grows lazily: [`Scalar::sqrt`] first looks for a root
//! in the current tower and only adjoins a new level when none exists.
//!
//! An element of level `k` is stored as `a + b·√r_k` with `a`, `b` of lower
//! level and `b ≠ 0`. Since `{1, √r_k}` is a basis, this representation is
//! unique, so structural equality and hashing coincide with equality of reals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::ScalarError;

#[derive(Clone)]
pub struct Scalar(Repr);

#[derive(Clone)]
enum Repr {
    Rat(Arc<BigRational>),
    Ext(Arc<Ext>),
}

struct Ext {
    root: Arc<Radical>,
    a: Scalar,
    b: Scalar,
}

/// One level of the tower: `√radicand` adjoined at `level` (1-based).
struct Radical {
    level: usize,
    radicand: Scalar,
}

fn tower() -> &'static Mutex<Vec<Arc<Radical>>> {
    static TOWER: OnceLock<Mutex<Vec<Arc<Radical>>>> = OnceLock::new();
    TOWER.get_or_init(|| Mutex::new(Vec::new()))
}

impl Scalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar(Repr::Rat(Arc::new(r)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rat(r) => Some(r),
            Repr::Ext(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.0, Repr::Rat(_))
    }

    /// Tower level of the element (0 for rationals).
    pub fn level(&self) -> usize {
        match &self.0 {
            Repr::Rat(_) => 0,
            Repr::Ext(e) => e.root.level,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rat(r) => r.is_zero(),
            Repr::Ext(_) => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rat(r) => r.is_one(),
            Repr::Ext(_) => false,
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Rat(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Repr::Ext(e) => {
                let sb = e.b.signum();
                let sa = e.a.signum();
                if sa == 0 || sa == sb {
                    return sb;
                }
                // a and b√r have opposite signs: compare a² with b²r.
                let d = &(&e.a * &e.a) - &(&(&e.b * &e.b) * &e.root.radicand);
                match d.signum() {
                    1 => sa,
                    -1 => sb,
                    _ => unreachable!("radicand is a square below its level"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    pub fn recip(&self) -> Result<Scalar, ScalarError> {
        match &self.0 {
            Repr::Rat(r) => {
                if r.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::from_rational(r.recip()))
                }
            }
            Repr::Ext(e) => {
                let norm = &(&e.a * &e.a) - &(&(&e.b * &e.b) * &e.root.radicand);
                let a = e.a.checked_div(&norm)?;
                let b = (-&e.b).checked_div(&norm)?;
                Ok(make(&e.root, a, b))
            }
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if rhs.level() < self.level() {
            // Divide coefficientwise; no conjugate needed.
            if let Repr::Ext(e) = &self.0 {
                return Ok(make(&e.root, e.a.checked_div(rhs)?, e.b.checked_div(rhs)?));
            }
        }
        if let (Repr::Rat(a), Repr::Rat(b)) = (&self.0, &rhs.0) {
            return Ok(Scalar::from_rational(a.as_ref() / b.as_ref()));
        }
        Ok(self * &rhs.recip()?)
    }

    /// Nonnegative square root, extending the tower when necessary.
    pub fn sqrt(&self) -> Result<Scalar, ScalarError> {
        match self.signum() {
            -1 => return Err(ScalarError::NegativeSqrt(self.to_string())),
            0 => return Ok(Scalar::zero()),
            _ => {}
        }
        let mut levels = tower().lock().unwrap_or_else(|p| p.into_inner());
        if let Some(r) = sqrt_in(self, levels.len(), &levels) {
            return Ok(r.abs());
        }
        let (coeff, radicand) = match &self.0 {
            Repr::Rat(r) => squarefree_split(r),
            Repr::Ext(_) => (Scalar::one(), self.clone()),
        };
        let root = Arc::new(Radical {
            level: levels.len() + 1,
            radicand,
        });
        levels.push(root.clone());
        Ok(make(&root, Scalar::zero(), coeff))
    }

    /// Square root if `self` is already a square in the current tower.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        if self.is_negative() {
            return None;
        }
        let levels = tower().lock().unwrap_or_else(|p| p.into_inner());
        sqrt_in(self, levels.len(), &levels).map(|r| r.abs())
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Rat(r) => rational_to_f64(r),
            Repr::Ext(e) => e.a.to_f64() + e.b.to_f64() * e.root.radicand.to_f64().sqrt(),
        }
    }

    /// Visit `(coefficient structure)` for external evaluators such as
    /// interval oracles: returns `(a, b, radicand)` for extension elements.
    pub fn decompose(&self) -> Option<(Scalar, Scalar, Scalar)> {
        match &self.0 {
            Repr::Rat(_) => None,
            Repr::Ext(e) => Some((e.a.clone(), e.b.clone(), e.root.radicand.clone())),
        }
    }

    pub fn min(a: &Scalar, b: &Scalar) -> Scalar {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Scalar, b: &Scalar) -> Scalar {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn split_at(&self, level: usize) -> (Scalar, Scalar) {
        match &self.0 {
            Repr::Ext(e) if e.root.level == level => (e.a.clone(), e.b.clone()),
            _ => (self.clone(), Scalar::zero()),
        }
    }

    fn root(&self) -> Option<&Arc<Radical>> {
        match &self.0 {
            Repr::Ext(e) => Some(&e.root),
            Repr::Rat(_) => None,
        }
    }
}

fn make(root: &Arc<Radical>, a: Scalar, b: Scalar) -> Scalar {
    if b.is_zero() {
        a
    } else {
        Scalar(Repr::Ext(Arc::new(Ext {
            root: root.clone(),
            a,
            b,
        })))
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge operands before converting.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// `r = c² · k` with `k` a squarefree integer where trial division allows.
fn squarefree_split(r: &BigRational) -> (Scalar, Scalar) {
    let d = r.denom().clone();
    let mut m = r.numer() * &d;
    let mut s = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(100_000u32);
    while &p * &p <= m && p < limit {
        let pp = &p * &p;
        while (&m % &pp).is_zero() {
            m /= &pp;
            s *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    let coeff = BigRational::new(s, d);
    (
        Scalar::from_rational(coeff),
        Scalar::from_rational(BigRational::from_integer(m)),
    )
}

/// A square root of `x` inside the first `level` levels of the tower.
fn sqrt_in(x: &Scalar, level: usize, levels: &[Arc<Radical>]) -> Option<Scalar> {
    if x.is_negative() {
        return None;
    }
    if level == 0 {
        return x.as_rational().and_then(rational_sqrt).map(Scalar::from_rational);
    }
    if x.level() > level {
        return None;
    }
    let root = &levels[level - 1];
    let r = &root.radicand;
    let (a, b) = x.split_at(level);
    if b.is_zero() {
        if let Some(c) = sqrt_in(&a, level - 1, levels) {
            return Some(c);
        }
        // (d√r)² = d²r
        let q = a.checked_div(r).ok()?;
        return sqrt_in(&q, level - 1, levels).map(|d| make(root, Scalar::zero(), d));
    }
    // (c + d√r)² = c² + d²r + 2cd√r
    let norm = &(&a * &a) - &(&(&b * &b) * r);
    let n = sqrt_in(&norm, level - 1, levels)?;
    let half = Scalar::ratio(1, 2);
    for cand in [&(&a + &n) * &half, &(&a - &n) * &half] {
        if let Some(c) = sqrt_in(&cand, level - 1, levels) {
            if c.is_zero() {
                continue;
            }
            let d = b.checked_div(&(&c + &c)).ok()?;
            return Some(make(root, c, d));
        }
    }
    None
}

fn add_impl(x: &Scalar, y: &Scalar) -> Scalar {
    if let (Repr::Rat(a), Repr::Rat(b)) = (&x.0, &y.0) {
        return Scalar::from_rational(a.as_ref() + b.as_ref());
    }
    let root = if x.level() >= y.level() { x.root() } else { y.root() }
        .expect("non-rational operand")
        .clone();
    let (xa, xb) = x.split_at(root.level);
    let (ya, yb) = y.split_at(root.level);
    make(&root, &xa + &ya, &xb + &yb)
}

fn neg_impl(x: &Scalar) -> Scalar {
    match &x.0 {
        Repr::Rat(r) => Scalar::from_rational(-r.as_ref()),
        Repr::Ext(e) => make(&e.root, -&e.a, -&e.b),
    }
}

fn mul_impl(x: &Scalar, y: &Scalar) -> Scalar {
    match (&x.0, &y.0) {
        (Repr::Rat(a), Repr::Rat(b)) => Scalar::from_rational(a.as_ref() * b.as_ref()),
        _ => {
            let (lx, ly) = (x.level(), y.level());
            if lx > ly {
                let Repr::Ext(e) = &x.0 else { unreachable!() };
                make(&e.root, &e.a * y, &e.b * y)
            } else if ly > lx {
                let Repr::Ext(e) = &y.0 else { unreachable!() };
                make(&e.root, x * &e.a, x * &e.b)
            } else {
                let (Repr::Ext(e), Repr::Ext(f)) = (&x.0, &y.0) else {
                    unreachable!()
                };
                let a = &(&e.a * &f.a) + &(&(&e.b * &f.b) * &e.root.radicand);
                let b = &(&e.a * &f.b) + &(&e.b * &f.a);
                make(&e.root, a, b)
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Rat(a), Repr::Rat(b)) => a == b,
            (Repr::Ext(e), Repr::Ext(f)) => e.root.level == f.root.level && e.a == f.a && e.b == f.b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Rat(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Repr::Ext(e) => {
                1u8.hash(state);
                e.root.level.hash(state);
                e.a.hash(state);
                e.b.hash(state);
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Repr::Rat(a), Repr::Rat(b)) = (&self.0, &other.0) {
            return a.cmp(b);
        }
        if self == other {
            return Ordering::Equal;
        }
        (self - other).signum().cmp(&0)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'b Scalar) -> Scalar {
                $f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                $f(&self, rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $f(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, |x: &Scalar, y: &Scalar| add_impl(x, &neg_impl(y)));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, |x: &Scalar, y: &Scalar| x
    .checked_div(y)
    .expect("division by zero"));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_impl(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_impl(self)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

// ---------------------------------------------------------------------------
// text form

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Writes `coeff*sqrt(rad)` with `coeff` known to be nonzero, as a term that
/// follows `+` or `-` (the sign has already been emitted when `abs` is set).
fn fmt_radical_term(coeff: &Scalar, rad: &Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match coeff.as_rational() {
        Some(r) if r.is_one() => write!(f, "sqrt({rad})"),
        Some(r) => {
            fmt_rational(r, f)?;
            write!(f, "*sqrt({rad})")
        }
        None => write!(f, "({coeff})*sqrt({rad})"),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rat(r) => fmt_rational(r, f),
            Repr::Ext(e) => {
                let rad = &e.root.radicand;
                let neg_b = e.b.as_rational().is_some_and(|r| r.is_negative());
                if e.a.is_zero() {
                    if neg_b {
                        write!(f, "-")?;
                        fmt_radical_term(&-&e.b, rad, f)
                    } else {
                        fmt_radical_term(&e.b, rad, f)
                    }
                } else {
                    write!(f, "{}", e.a)?;
                    if neg_b {
                        write!(f, " - ")?;
                        fmt_radical_term(&-&e.b, rad, f)
                    } else {
                        write!(f, " + ")?;
                        fmt_radical_term(&e.b, rad, f)
                    }
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ScalarError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn scalar(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.scalar()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b's') => {
                if !self.s[self.pos..].starts_with(b"sqrt") {
                    return Err(self.err("unknown identifier"));
                }
                self.pos += 4;
                self.expect(b'(')?;
                let v = self.scalar()?;
                self.expect(b')')?;
                v.sqrt()
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            _ => Err(self.err("expected a number, 'sqrt', '(' or '-'")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        BigInt::from_str(txt).map_err(|_| self.err("bad integer"))
    }

    fn rational(&mut self) -> Result<Scalar, ScalarError> {
        let n = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.integer()?;
            if d.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            Ok(Scalar::from_rational(BigRational::new(n, d)))
        } else {
            Ok(Scalar::from_rational(BigRational::from_integer(n)))
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let v = p.scalar()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer helper used by oracles: `⌊√n⌋`.
pub fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Greatest common divisor of two integers (nonnegative).
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(s("(1+sqrt(2))*(-1+sqrt(2))"), Scalar::one());
        assert_eq!(s("sqrt(2)*sqrt(2)"), Scalar::from_int(2));
        assert_eq!(s("1/2 + 1/3"), Scalar::ratio(5, 6));
    }

    #[test]
    fn signs() {
        assert_eq!(s("sqrt(2) - 1").signum(), 1);
        assert_eq!(Scalar::zero().signum(), 0);
        assert_eq!(s("1 - sqrt(2)").signum(), -1);
        assert_eq!(s("sqrt(3) - sqrt(2) - 3/10").signum(), 1);
        assert_eq!(s("sqrt(3) - sqrt(2) - 32/100").signum(), -1);
    }

    #[test]
    fn roots() {
        let r2 = Scalar::from_int(2).sqrt().unwrap();
        assert_eq!(&r2 * &r2, Scalar::from_int(2));
        assert_eq!(Scalar::zero().sqrt().unwrap(), Scalar::zero());
        let v = Scalar::ratio(1, 5).sqrt().unwrap();
        assert_eq!(&v * &v, Scalar::ratio(1, 5));
        assert!(v.is_positive());
        assert!(Scalar::from_int(-1).sqrt().is_err());
    }

    #[test]
    fn roots_reuse_tower() {
        let r8 = Scalar::from_int(8).sqrt().unwrap();
        let r2 = Scalar::from_int(2).sqrt().unwrap();
        assert_eq!(r8, &r2 * &Scalar::from_int(2));
        let r6 = Scalar::from_int(6).sqrt().unwrap();
        let r3 = Scalar::from_int(3).sqrt().unwrap();
        assert_eq!(&r2 * &r3, r6);
        // (1 + √2)² = 3 + 2√2
        let x = s("3 + 2*sqrt(2)").sqrt().unwrap();
        assert_eq!(x, s("1 + sqrt(2)"));
    }

    #[test]
    fn division() {
        let x = s("1 + sqrt(2)");
        let inv = x.recip().unwrap();
        assert_eq!(inv, s("-1 + sqrt(2)"));
        assert!(Scalar::one().checked_div(&Scalar::zero()).is_err());
    }

    #[test]
    fn text_round_trip() {
        for t in [
            "0",
            "-3/7",
            "sqrt(2)",
            "-sqrt(2)",
            "1/2*sqrt(2)",
            "-1/2*sqrt(2)",
            "1 - 2*sqrt(5)",
            "sqrt(2) + sqrt(3)",
            "(1 + sqrt(2))*sqrt(3) - 1/3",
            "sqrt(1 + sqrt(2))",
        ] {
            let x = s(t);
            let back: Scalar = x.to_string().parse().unwrap();
            assert_eq!(x, back, "{t} -> {x}");
        }
    }

    #[test]
    fn parse_errors() {
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1 +".parse::<Scalar>().is_err());
        assert!("sqr(2)".parse::<Scalar>().is_err());
        assert!("(1".parse::<Scalar>().is_err());
        assert!("1 2".parse::<Scalar>().is_err());
    }

    #[test]
    fn ordering() {
        let mut v = vec![s("sqrt(2)"), s("3/2"), s("-1"), s("7/5")];
        v.sort();
        assert_eq!(v, vec![s("-1"), s("7/5"), s("sqrt(2)"), s("3/2")]);
    }
}
