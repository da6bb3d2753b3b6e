//! Conway notation, continued-fraction values and 2-bridge classification.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::TangleError;

/// A rational tangle `T(a_1, …, a_m)`; `a_1` is the innermost twist region.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ConwayNotation {
    entries: Vec<i64>,
}

impl ConwayNotation {
    pub fn new(entries: Vec<i64>) -> Result<Self, TangleError> {
        if entries.is_empty() {
            return Err(TangleError::Empty);
        }
        if let Some(pos) = entries.iter().position(|&a| a == 0) {
            return Err(TangleError::ZeroEntry { position: pos + 1 });
        }
        Ok(ConwayNotation { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Odd length with every entry of one sign.
    pub fn is_normal(&self) -> bool {
        self.entries.len() % 2 == 1
            && (self.entries.iter().all(|&a| a > 0) || self.entries.iter().all(|&a| a < 0))
    }

    pub fn is_negative(&self) -> bool {
        self.entries.iter().all(|&a| a < 0)
    }

    /// Negates every entry (the mirror tangle).
    pub fn mirror(&self) -> ConwayNotation {
        ConwayNotation {
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

impl TryFrom<Vec<i64>> for ConwayNotation {
    type Error = TangleError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        ConwayNotation::new(v)
    }
}

impl From<ConwayNotation> for Vec<i64> {
    fn from(n: ConwayNotation) -> Vec<i64> {
        n.entries
    }
}

impl fmt::Display for ConwayNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for ConwayNotation {
    type Err = TangleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_notation(s)
    }
}

/// Parses `"-5,-3,-4"`; whitespace around tokens is ignored.
pub fn parse_notation(text: &str) -> Result<ConwayNotation, TangleError> {
    if text.trim().is_empty() {
        return Err(TangleError::Empty);
    }
    let mut entries = Vec::new();
    for (i, tok) in text.split(',').enumerate() {
        let t = tok.trim();
        let a: i64 = t.parse().map_err(|_| TangleError::BadToken {
            token: tok.to_string(),
            position: i + 1,
        })?;
        if a == 0 {
            return Err(TangleError::ZeroEntry { position: i + 1 });
        }
        entries.push(a);
    }
    ConwayNotation::new(entries)
}

/// An element of ℚ ∪ {∞}; ∞ is stored as `1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct ExtFraction {
    p: i64,
    q: i64,
}

impl ExtFraction {
    pub const INFINITY: ExtFraction = ExtFraction { p: 1, q: 0 };

    /// Reduces `p/q`; `q = 0` with `p ≠ 0` gives ∞.
    pub fn new(p: i64, q: i64) -> Result<Self, TangleError> {
        if p == 0 && q == 0 {
            return Err(TangleError::Indeterminate);
        }
        if q == 0 {
            return Ok(Self::INFINITY);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = p.checked_neg().ok_or(TangleError::Overflow)?;
            q = -q;
        }
        Ok(ExtFraction { p, q })
    }

    pub fn integer(a: i64) -> Self {
        ExtFraction { p: a, q: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.p
    }

    pub fn denom(&self) -> i64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    /// `1/x`, with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(self) -> Self {
        if self.q == 0 {
            return ExtFraction { p: 0, q: 1 };
        }
        if self.p == 0 {
            return Self::INFINITY;
        }
        if self.p < 0 {
            ExtFraction { p: -self.q, q: -self.p }
        } else {
            ExtFraction { p: self.q, q: self.p }
        }
    }

    /// `a + x`, with `a + ∞ = ∞`.
    pub fn add_integer(self, a: i64) -> Result<Self, TangleError> {
        if self.q == 0 {
            return Ok(Self::INFINITY);
        }
        let p = a
            .checked_mul(self.q)
            .and_then(|t| t.checked_add(self.p))
            .ok_or(TangleError::Overflow)?;
        ExtFraction::new(p, self.q)
    }
}

impl fmt::Display for ExtFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl From<ExtFraction> for String {
    fn from(x: ExtFraction) -> String {
        x.to_string()
    }
}

impl TryFrom<String> for ExtFraction {
    type Error = TangleError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for ExtFraction {
    type Err = TangleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Self::INFINITY);
        }
        let bad = || TangleError::BadToken {
            token: s.to_string(),
            position: 1,
        };
        match s.split_once('/') {
            Some((a, b)) => {
                let p = a.trim().parse().map_err(|_| bad())?;
                let q = b.trim().parse().map_err(|_| bad())?;
                ExtFraction::new(p, q)
            }
            None => Ok(ExtFraction::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// Evaluates `a_m + 1/(a_{m-1} + … + 1/a_1)` over ℚ ∪ {∞}.
pub fn fraction(n: &ConwayNotation) -> ExtFraction {
    try_fraction(n).expect("continued fraction overflowed i64")
}

/// Checked variant of [`fraction`].
pub fn try_fraction(n: &ConwayNotation) -> Result<ExtFraction, TangleError> {
    let same_sign = n.is_negative() || n.entries.iter().all(|&a| a > 0);
    let mut f = ExtFraction::INFINITY;
    for &a in &n.entries {
        f = f.recip().add_integer(a)?;
        if same_sign {
            debug_assert!(!f.is_infinite() && !f.is_zero());
        }
    }
    Ok(f)
}

/// Same-sign, odd-length notation with the same fraction.
///
/// Such a form exists exactly when `|f| ≥ 1`: with every term of one sign the
/// outermost term already has absolute value at least one.
pub fn normalize(n: &ConwayNotation) -> Result<ConwayNotation, TangleError> {
    normalize_fraction(try_fraction(n)?)
}

/// Builds the normal form of a fraction directly.
pub fn normalize_fraction(f: ExtFraction) -> Result<ConwayNotation, TangleError> {
    if f.is_infinite() || f.is_zero() {
        return Err(TangleError::Degenerate(f));
    }
    let sign = f.p.signum();
    let (mut p, mut q) = (f.p.abs(), f.q);
    if p < q {
        return Err(TangleError::NoSameSignForm(f));
    }
    // outermost partial quotient first
    let mut terms = Vec::new();
    while q != 0 {
        terms.push(p / q);
        let r = p % q;
        p = q;
        q = r;
    }
    terms.reverse();
    if terms.len() % 2 == 0 {
        // (b, …) ≡ (1, b−1, …); the innermost quotient is ≥ 2 here
        let b = terms[0];
        debug_assert!(b >= 2);
        terms[0] = b - 1;
        terms.insert(0, 1);
    }
    ConwayNotation::new(terms.into_iter().map(|a| a * sign).collect())
}

pub fn tangles_equivalent(a: &ConwayNotation, b: &ConwayNotation) -> bool {
    fraction(a) == fraction(b)
}

/// `Σ|a_i|`, valid as a crossing number only for normal forms.
pub fn crossing_number(n: &ConwayNotation) -> Result<u64, TangleError> {
    if !n.is_normal() {
        return Err(TangleError::NotNormal(n.clone()));
    }
    Ok(n.entries.iter().map(|a| a.unsigned_abs()).sum())
}

/// Schubert data `b(p, q)` of the closure; `mirrored` records a negative fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchubertPair {
    pub p: u64,
    pub q: u64,
    pub mirrored: bool,
}

impl SchubertPair {
    /// Unmirrored pair; `q` is reduced mod `p`.
    pub fn new(p: u64, q: u64) -> Self {
        SchubertPair {
            p,
            q: if p > 0 { q % p } else { q },
            mirrored: false,
        }
    }

    /// The residue class of q with the chirality folded in.
    fn signed_class(&self) -> u64 {
        if self.p <= 1 {
            return 0;
        }
        if self.mirrored {
            (self.p - self.q) % self.p
        } else {
            self.q
        }
    }
}

impl fmt::Display for SchubertPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b({},{})", self.p, self.q)?;
        if self.mirrored {
            write!(f, "*")?;
        }
        Ok(())
    }
}

pub fn schubert_pair(n: &ConwayNotation) -> Result<SchubertPair, TangleError> {
    let f = try_fraction(n)?;
    if f.is_infinite() || f.is_zero() {
        return Err(TangleError::Degenerate(f));
    }
    let p = f.p.unsigned_abs();
    Ok(SchubertPair {
        p,
        q: f.q as u64 % p,
        mirrored: f.p < 0,
    })
}

/// `b(p,q) ≅ b(p',q')` iff `p = p'` and `q' ≡ q^{±1} (mod p)`.
pub fn knots_equivalent(a: &SchubertPair, b: &SchubertPair) -> bool {
    if a.p != b.p {
        return false;
    }
    if a.p <= 2 {
        return true;
    }
    let (x, y) = (a.signed_class(), b.signed_class());
    x == y || (x * y) % a.p == 1
}

/// 2 for links (even determinant or ∞), 1 for knots.
pub fn component_count(f: &ExtFraction) -> Result<u8, TangleError> {
    if f.is_zero() {
        return Err(TangleError::Degenerate(*f));
    }
    if f.is_infinite() || f.p.abs() % 2 == 0 {
        Ok(2)
    } else {
        Ok(1)
    }
}

/// Closures of type `T(2,p)`: `Some(true)` when the closure matches the single
/// twist region of the same sign and size, `Some(false)` for its mirror.
pub(crate) fn torus_handedness(f: ExtFraction) -> Option<bool> {
    let p = f.p.abs();
    if p < 2 || f.is_infinite() {
        return None;
    }
    let q = f.q.rem_euclid(p);
    if q == 1 % p {
        Some(true)
    } else if q == p - 1 {
        Some(false)
    } else {
        None
    }
}
