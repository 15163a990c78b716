use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{upoly, CanonicalText, Ring};
use crate::error::{Error, Result};

/// Integer Laurent polynomial in `q`.
///
/// Terms are kept sorted by ascending exponent and no zero coefficient is
/// ever stored, so structural equality is coefficient-wise equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * q^e`
    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: vec![(e, c)],
            }
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    /// `q^e`
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(1, e)
    }

    /// `λ = q - q^{-1}`
    pub fn lambda() -> Self {
        Self::from_terms([(-1, BigInt::from(-1)), (1, BigInt::one())])
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents and dropping zeros.
    pub fn from_terms(it: impl IntoIterator<Item = (i32, BigInt)>) -> Self {
        let mut v: Vec<(i32, BigInt)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut terms: Vec<(i32, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|t| !t.1.is_zero());
        Self { terms }
    }

    pub fn terms(&self) -> &[(i32, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// The image under `q -> q^{-1}`.
    pub fn invert_q(&self) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(e, c)| (-e, c.clone())).collect();
        terms.reverse();
        Self { terms }
    }

    /// Exact value at a nonzero rational point.
    pub fn eval(&self, q0: &BigRational) -> Result<BigRational> {
        if q0.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::DivisionByZero {
                denominator: "q".into(),
                at: q0.to_string(),
            });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 {
                num_traits::pow(q0.clone(), *e as usize)
            } else {
                num_traits::pow(q0.recip(), (-e) as usize)
            };
            acc += p * BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }

    /// Exact quotient in `Z[q, q^{-1}]`, `None` when the divisor does not divide.
    pub fn exact_div(&self, other: &Self) -> Option<Self> {
        assert!(!other.is_zero(), "exact_div by zero");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (sa, a) = self.to_dense();
        let (sb, b) = other.to_dense();
        let q = upoly::exact_div(&a, &b)?;
        Some(Self::from_dense(sa - sb, &q))
    }

    /// `(shift, coefficients)` with `self = q^shift * Σ coeffs[k] q^k` and `coeffs[0] != 0`.
    pub(crate) fn to_dense(&self) -> (i32, Vec<BigInt>) {
        let Some(lo) = self.min_exp() else {
            return (0, Vec::new());
        };
        let hi = self.max_exp().unwrap();
        let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    pub(crate) fn from_dense(shift: i32, v: &[BigInt]) -> Self {
        Self {
            terms: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (shift + k as i32, c.clone()))
                .collect(),
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { terms: out }
    }

    pub fn neg_ref(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return Self {
                terms: self.terms.iter().map(|(e2, c2)| (e + e2, c * c2)).collect(),
            };
        }
        if self.terms.len() == 1 {
            return other.mul_ref(self);
        }
        let lo = self.min_exp().unwrap() + other.min_exp().unwrap();
        let hi = self.max_exp().unwrap() + other.max_exp().unwrap();
        let mut acc = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                acc[(ea + eb - lo) as usize] += ca * cb;
            }
        }
        Self::from_dense(lo, &acc)
    }
}

impl Ring for LaurentPoly {
    const COMMUTATIVE: bool = true;
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
}

impl CanonicalText for LaurentPoly {
    const RING_TAG: &'static str = "laurent";

    fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(e, c)| format!("{c}*q^{e}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn from_text(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || Error::Parse(format!("not a Laurent polynomial: {s:?}"));
        let mut terms = Vec::new();
        let mut last: Option<i32> = None;
        for t in s.split(" + ") {
            let (c, e) = t.split_once("*q^").ok_or_else(bad)?;
            let c: BigInt = c.parse().map_err(|_| bad())?;
            let e: i32 = e.parse().map_err(|_| bad())?;
            if c.is_zero() || last.is_some_and(|l| l >= e) {
                return Err(bad());
            }
            last = Some(e);
            terms.push((e, c));
        }
        Ok(Self { terms })
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.to_text())
    }
}

impl LaurentPoly {
    /// Leading coefficient sign, used when normalizing denominators.
    pub(crate) fn leading_is_negative(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_is_ascending() {
        let p = LaurentPoly::from_terms([(3, BigInt::from(1)), (-1, BigInt::from(-1))]);
        assert_eq!(p.to_text(), "-1*q^-1 + 1*q^3");
        assert_eq!(LaurentPoly::from_text("-1*q^-1 + 1*q^3").unwrap(), p);
        assert_eq!(LaurentPoly::from_text("0").unwrap(), LaurentPoly::zero());
        assert!(LaurentPoly::from_text("1*q^3 + 1*q^1").is_err());
        assert!(LaurentPoly::from_text("0*q^1").is_err());
    }

    #[test]
    fn lambda_times_lambda() {
        let l = LaurentPoly::lambda();
        // (q - 1/q)^2 = q^2 - 2 + q^-2
        assert_eq!(l.mul_ref(&l).to_text(), "1*q^-2 + -2*q^0 + 1*q^2");
    }

    #[test]
    fn exact_division_in_laurent_ring() {
        let a = LaurentPoly::from_terms([(-3, BigInt::from(1)), (3, BigInt::from(-1))]);
        let q = a.exact_div(&LaurentPoly::lambda()).unwrap();
        assert_eq!(q.to_text(), "-1*q^-2 + -1*q^0 + -1*q^2");
        assert!(LaurentPoly::one()
            .exact_div(&LaurentPoly::from_terms([(0, 1.into()), (1, 1.into())]))
            .is_none());
    }
}
