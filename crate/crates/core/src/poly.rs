//! Sparse polynomials in one variable `q` with big-integer coefficients.
//!
//! Invariant: no exponent maps to a zero coefficient.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    coeffs: BTreeMap<u32, BigInt>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    /// `coeff * q^exp`
    pub fn monomial(exp: u32, coeff: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn q_power(exp: u32) -> Self {
        Self::monomial(exp, BigInt::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    pub fn add_term(&mut self, exp: u32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: u32) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: u32) -> Self {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// `[[exp, "coeff"], ...]`, coefficients as decimal strings.
    pub fn to_pairs(&self) -> Vec<(u32, String)> {
        self.terms().map(|(e, c)| (e, c.to_string())).collect()
    }

    pub fn from_pairs(pairs: &[(u32, String)]) -> Result<Self, String> {
        let mut p = Self::zero();
        for (e, c) in pairs {
            let v: BigInt = c.parse().map_err(|_| format!("bad coefficient {c:?}"))?;
            p.add_term(*e, v);
        }
        Ok(p)
    }
}

impl Serialize for QPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(u32, String)>::deserialize(d)?;
        QPolynomial::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

impl AddAssign<&QPolynomial> for QPolynomial {
    fn add_assign(&mut self, rhs: &QPolynomial) {
        for (e, c) in rhs.terms() {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&QPolynomial> for QPolynomial {
    fn sub_assign(&mut self, rhs: &QPolynomial) {
        for (e, c) in rhs.terms() {
            self.add_term(e, -c.clone());
        }
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = QPolynomial::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_drops_zeros() {
        let a = QPolynomial::from_terms([(1, 1), (2, 1)]);
        let b = QPolynomial::from_terms([(1, 1)]);
        let d = &a - &b;
        assert_eq!(d, QPolynomial::q_power(2));
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).degree(), None);
    }

    #[test]
    fn product_and_display() {
        let a = QPolynomial::from_terms([(0, 1), (1, 1)]);
        let sq = &a * &a;
        assert_eq!(sq, QPolynomial::from_terms([(0, 1), (1, 2), (2, 1)]));
        assert_eq!(sq.to_string(), "1 + 2q + q^2");
        assert_eq!(QPolynomial::from_terms([(2, -1), (4, 3)]).to_string(), "-q^2 + 3q^4");
        assert_eq!(sq.eval_at_one(), BigInt::from(4));
    }

    #[test]
    fn serde_as_string_pairs() {
        let p = QPolynomial::from_terms([(2, 1), (4, 1)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[[2,"1"],[4,"1"]]"#);
        let back: QPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
