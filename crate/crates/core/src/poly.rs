//! Integer Laurent polynomials in one variable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Sparse Laurent polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Substitutes `x → x^k` (k may be negative).
    pub fn scale_exponents(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    /// Divides every exponent by `k`; `None` if some exponent is not a multiple.
    pub fn divide_exponents(&self, k: i64) -> Option<Self> {
        if self.terms.keys().any(|e| e % k != 0) {
            return None;
        }
        Some(Self::from_terms(self.terms().map(|(e, c)| (e / k, c))))
    }

    /// `x → x^{-1}`, the mirror image for bracket and Jones polynomials.
    pub fn mirror(&self) -> Self {
        self.scale_exponents(-1)
    }

    pub fn shift(&self, by: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e + by, c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (*e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "x")?,
                (1, m) => write!(f, "{m}x")?,
                (e, 1) => write!(f, "x^{e}")?,
                (e, m) => write!(f, "{m}x^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(c, e);
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let d = LaurentPolynomial::from_terms([(2, -1), (-2, -1)]);
        let d2 = &d * &d;
        assert_eq!(d2, LaurentPolynomial::from_terms([(4, 1), (0, 2), (-4, 1)]));
        assert!((&d - &d).is_zero());
        assert_eq!(d.mirror(), d);
        assert_eq!(d.pow(0), LaurentPolynomial::one());
        assert_eq!(d.to_string(), "-x^2 - x^-2");
    }
}
