//! Exact plane vectors and 2×2 matrices over [`Scalar`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, GeomError};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Vec2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Vec2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Vec2::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    pub fn zero() -> Self {
        Vec2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, o: &Vec2) -> Scalar {
        &(&self.x * &o.x) + &(&self.y * &o.y)
    }

    /// z-component of the cross product.
    pub fn cross(&self, o: &Vec2) -> Scalar {
        &(&self.x * &o.y) - &(&self.y * &o.x)
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn scale(&self, r: &Scalar) -> Vec2 {
        Vec2::new(&self.x * r, &self.y * r)
    }

    /// Counterclockwise rotation by a right angle.
    pub fn rot90(&self) -> Vec2 {
        Vec2::new(-&self.y, self.x.clone())
    }

    /// `self / |self|`.
    pub fn normalized(&self) -> Result<Vec2, GeomError> {
        if self.is_zero() {
            return Err(GeomError::ZeroVector);
        }
        let n = self.norm2().sqrt()?;
        Ok(Vec2::new(self.x.checked_div(&n)?, self.y.checked_div(&n)?))
    }

    /// 0 for arguments in `[0, π)`, 1 for `[π, 2π)`.
    fn half(&self) -> u8 {
        let sy = self.y.signum();
        if sy > 0 || (sy == 0 && self.x.is_positive()) {
            0
        } else {
            1
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// Compares `arg(u)` and `arg(v)` in `[0, 2π)`.
pub fn arg_cmp(u: &Vec2, v: &Vec2) -> Result<Ordering, GeomError> {
    if u.is_zero() || v.is_zero() {
        return Err(GeomError::ZeroVector);
    }
    Ok(arg_cmp_nz(u, v))
}

/// [`arg_cmp`] for vectors already known to be nonzero.
pub fn arg_cmp_nz(u: &Vec2, v: &Vec2) -> Ordering {
    let (hu, hv) = (u.half(), v.half());
    if hu != hv {
        return hu.cmp(&hv);
    }
    match u.cross(v).signum() {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// True iff `u` and `v` are positive multiples of each other.
pub fn same_ray(u: &Vec2, v: &Vec2) -> bool {
    u.cross(v).is_zero() && u.dot(v).is_positive()
}

impl Add for &Vec2 {
    type Output = Vec2;
    fn add(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Vec2 {
    type Output = Vec2;
    fn sub(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Row-major `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::ints(1, 0, 0, 1)
    }

    /// Rotation by a right angle.
    pub fn s() -> Self {
        Mat2::ints(0, -1, 1, 0)
    }

    /// The unipotent `[[1, k], [0, 1]]`.
    pub fn t_pow(k: i64) -> Self {
        Mat2::ints(1, k, 0, 1)
    }

    pub fn diag(r: Scalar) -> Self {
        Mat2::new(r.clone(), Scalar::zero(), Scalar::zero(), r)
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            &(&self.a * &v.x) + &(&self.b * &v.y),
            &(&self.c * &v.x) + &(&self.d * &v.y),
        )
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    pub fn inverse(&self) -> Result<Mat2, GeomError> {
        let det = self.det();
        let id = det.recip()?;
        Ok(Mat2::new(
            &self.d * &id,
            -&(&self.b * &id),
            -&(&self.c * &id),
            &self.a * &id,
        ))
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn col0(&self) -> Vec2 {
        Vec2::new(self.a.clone(), self.c.clone())
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Mat2 {
    type Err = ConfigError;

    /// Accepts `[[a,b],[c,d]]` with entries in the scalar grammar.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| ConfigError::BadMatrix(s.to_string(), m.to_string());
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad("expected outer brackets"))?;
        // Split at depth-0 commas; entries may contain parentheses.
        let mut rows = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut entries: Vec<String> = Vec::new();
        for ch in inner.chars() {
            match ch {
                '[' if depth == 0 => {
                    entries.clear();
                    cur.clear();
                    depth = 1;
                }
                ']' if depth == 1 => {
                    entries.push(std::mem::take(&mut cur));
                    rows.push(std::mem::take(&mut entries));
                    depth = 0;
                }
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth -= 1;
                    cur.push(ch);
                }
                ',' if depth == 1 => entries.push(std::mem::take(&mut cur)),
                ',' | ' ' if depth == 0 => {}
                _ if depth >= 1 => cur.push(ch),
                _ => return Err(bad("unexpected character between rows")),
            }
        }
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(bad("expected two rows of two entries"));
        }
        let p = |e: &str| e.parse::<Scalar>().map_err(|err| bad(&err.to_string()));
        Ok(Mat2::new(
            p(&rows[0][0])?,
            p(&rows[0][1])?,
            p(&rows[1][0])?,
            p(&rows[1][1])?,
        ))
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
