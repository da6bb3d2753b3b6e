//! Exact planar primitives for axis-aligned polylines.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or an integer.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().ok()?;
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// `"p/q"` with an explicit denominator, as used in every JSON document.
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Q) -> f64 {
    let n: f64 = x.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = x.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(q(x), q(y))
    }

    pub fn reflect_x(&self) -> Point {
        Point::new(-self.x.clone(), self.y.clone())
    }

    pub fn translate(&self, dx: &Q, dy: &Q) -> Point {
        Point::new(&self.x + dx, &self.y + dy)
    }

    pub fn scale(&self, k: &Q) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    /// L1 distance; equals Euclidean distance for axis-aligned pairs.
    pub fn l1(&self, other: &Point) -> Q {
        (&self.x - &other.x).abs() + (&self.y - &other.y).abs()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_q(&self.x), format_q(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let x = parse_q(&a).ok_or_else(|| serde::de::Error::custom(format!("bad rational {a:?}")))?;
        let y = parse_q(&b).ok_or_else(|| serde::de::Error::custom(format!("bad rational {b:?}")))?;
        Ok(Point { x, y })
    }
}

/// Unit axis direction of `a → b` as `(dx, dy)` in {−1, 0, 1}², or `None`
/// when the segment is degenerate or not axis-aligned.
pub fn axis_dir(a: &Point, b: &Point) -> Option<(i8, i8)> {
    let sx = sgn(&(&b.x - &a.x));
    let sy = sgn(&(&b.y - &a.y));
    match (sx, sy) {
        (0, 0) => None,
        (_, 0) | (0, _) => Some((sx, sy)),
        _ => None,
    }
}

pub fn sgn(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// How two axis-aligned segments meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contact {
    Disjoint,
    /// Perpendicular crossing in the relative interior of both.
    Transversal(Point),
    /// Anything else: shared endpoints, T-junctions, collinear overlap.
    Degenerate(Point),
}

fn ordered(a: &Q, b: &Q) -> (Q, Q) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Exact contact classification of two axis-aligned segments.
pub fn contact(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> Contact {
    let ah = a0.y == a1.y;
    let bh = b0.y == b1.y;
    if ah == bh {
        // parallel: only collinear overlap matters
        let (same_line, (lo1, hi1), (lo2, hi2)) = if ah {
            (a0.y == b0.y, ordered(&a0.x, &a1.x), ordered(&b0.x, &b1.x))
        } else {
            (a0.x == b0.x, ordered(&a0.y, &a1.y), ordered(&b0.y, &b1.y))
        };
        if !same_line {
            return Contact::Disjoint;
        }
        let lo = if lo1 > lo2 { lo1 } else { lo2 };
        let hi = if hi1 < hi2 { hi1 } else { hi2 };
        if lo > hi {
            return Contact::Disjoint;
        }
        let p = if ah {
            Point::new(lo, a0.y.clone())
        } else {
            Point::new(a0.x.clone(), lo)
        };
        return Contact::Degenerate(p);
    }
    let (h0, h1, v0, v1) = if ah { (a0, a1, b0, b1) } else { (b0, b1, a0, a1) };
    let (xlo, xhi) = ordered(&h0.x, &h1.x);
    let (ylo, yhi) = ordered(&v0.y, &v1.y);
    let x = &v0.x;
    let y = &h0.y;
    if x < &xlo || x > &xhi || y < &ylo || y > &yhi {
        return Contact::Disjoint;
    }
    let p = Point::new(x.clone(), y.clone());
    if x == &xlo || x == &xhi || y == &ylo || y == &yhi {
        Contact::Degenerate(p)
    } else {
        Contact::Transversal(p)
    }
}
