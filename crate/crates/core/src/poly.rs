use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Integer Laurent polynomial in `q`.
///
/// ```
/// use oddkh::LaurentPolynomial as P;
/// let unknot = P::monomial(1, 1) + P::monomial(1, -1);
/// assert_eq!(unknot.to_string(), "q + q^-1");
/// assert_eq!((unknot.clone() * unknot).coefficient(0), 2);
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    /// `q + q^-1`.
    pub fn loop_value() -> Self {
        Self::monomial(1, 1) + Self::monomial(1, -1)
    }

    pub fn add_term(&mut self, coeff: i64, exp: i32) {
        if coeff == 0 {
            return;
        }
        let c = self.coeffs.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coefficient(&self, exp: i32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc * self.clone())
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPolynomial {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// Substitutes `q -> -q`.
    pub fn negate_variable(&self) -> Self {
        LaurentPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, &c)| (e, if e.rem_euclid(2) == 1 { -c } else { c }))
                .collect(),
        }
    }
}

impl Add for LaurentPolynomial {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.coeffs {
            self.add_term(c, e);
        }
        self
    }
}

impl Sub for LaurentPolynomial {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for LaurentPolynomial {
    type Output = Self;
    fn neg(self) -> Self {
        LaurentPolynomial {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for LaurentPolynomial {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &rhs.coeffs {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

/// Terms in decreasing degree, e.g. `q^9 - q^5 + 3 + q^-1`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (&e, &c)) in self.coeffs.iter().rev().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if n == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (a, e) {
                (_, 0) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "q^{e}")?,
                (_, 1) => write!(f, "{a}q")?,
                _ => write!(f, "{a}q^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let p = LaurentPolynomial::monomial(1, 1)
            + LaurentPolynomial::monomial(1, 3)
            + LaurentPolynomial::monomial(1, 5)
            + LaurentPolynomial::monomial(-1, 9);
        assert_eq!(p.to_string(), "-q^9 + q^5 + q^3 + q");
        let r = LaurentPolynomial::monomial(1, -2) + LaurentPolynomial::one();
        assert_eq!(r.to_string(), "1 + q^-2");
        assert_eq!(LaurentPolynomial::monomial(-3, 1).to_string(), "-3q");
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn arithmetic() {
        let l = LaurentPolynomial::loop_value();
        let sq = l.pow(2);
        assert_eq!(sq.coefficient(2), 1);
        assert_eq!(sq.coefficient(0), 2);
        assert_eq!(sq.coefficient(-2), 1);
        assert!((sq.clone() - sq).is_zero());
        assert_eq!(l.shift(1).coefficient(2), 1);
        assert_eq!(l.negate_variable(), -l);
    }

    #[test]
    fn json_is_exponent_map() {
        let p = LaurentPolynomial::monomial(2, -1);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"-1":2}"#);
        assert_eq!(serde_json::from_str::<LaurentPolynomial>(&s).unwrap(), p);
    }
}
