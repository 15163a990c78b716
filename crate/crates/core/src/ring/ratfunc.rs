use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{upoly, CanonicalText, LaurentPoly, Ring};
use crate::error::{Error, Result};

/// Reduced ratio of Laurent polynomials.
///
/// Canonical form: `gcd(num, den)` is a unit, and `den` is an ordinary
/// polynomial with nonzero constant term and positive leading coefficient.
/// Zero is `0 / 1`. Two values are equal iff their stored fields are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn q_pow(e: i32) -> Self {
        Self::from_laurent(LaurentPoly::q_pow(e))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// The underlying Laurent polynomial when the denominator is one.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::from_laurent(LaurentPoly::zero());
        }
        let (sn, n) = num.to_dense();
        let (sd, d) = den.to_dense();
        let g = upoly::gcd(&n, &d);
        let (n, d) = if g.len() == 1 && g[0] == BigInt::from(1) {
            (n, d)
        } else {
            (
                upoly::exact_div(&n, &g).expect("gcd divides numerator"),
                upoly::exact_div(&d, &g).expect("gcd divides denominator"),
            )
        };
        // den now has nonzero constant term; move its q-power into num
        let mut num = LaurentPoly::from_dense(sn - sd, &n);
        let mut den = LaurentPoly::from_dense(0, &d);
        if den.leading_is_negative() {
            num = num.neg_ref();
            den = den.neg_ref();
        }
        Self { num, den }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_laurent(self.num.add_ref(&other.num));
        }
        if self.den == other.den {
            return Self::normalized(self.num.add_ref(&other.num), self.den.clone());
        }
        Self::normalized(
            self.num
                .mul_ref(&other.den)
                .add_ref(&other.num.mul_ref(&self.den)),
            self.den.mul_ref(&other.den),
        )
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::from_laurent(LaurentPoly::zero());
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_laurent(self.num.mul_ref(&other.num));
        }
        Self::normalized(self.num.mul_ref(&other.num), self.den.mul_ref(&other.den))
    }

    pub fn neg_ref(&self) -> Self {
        Self {
            num: self.num.neg_ref(),
            den: self.den.clone(),
        }
    }

    /// The image under `q -> q^{-1}`.
    pub fn invert_q(&self) -> Self {
        Self::normalized(self.num.invert_q(), self.den.invert_q())
    }
}

/// Exact value of `f` at the rational point `q0`.
///
/// Fails when `q0 = 0` or when the denominator vanishes at `q0`, e.g. at a
/// root where some `k_q` used as a divisor is zero.
pub fn eval_at(f: &RatFunc, q0: &BigRational) -> Result<BigRational> {
    if q0.is_zero() {
        return Err(Error::DivisionByZero {
            denominator: "q".into(),
            at: q0.to_string(),
        });
    }
    let d = f.den.eval(q0)?;
    if d.is_zero() {
        return Err(Error::DivisionByZero {
            denominator: f.den.to_text(),
            at: q0.to_string(),
        });
    }
    Ok(f.num.eval(q0)? / d)
}

impl From<LaurentPoly> for RatFunc {
    fn from(p: LaurentPoly) -> Self {
        Self::from_laurent(p)
    }
}

impl Ring for RatFunc {
    const COMMUTATIVE: bool = true;
    fn zero() -> Self {
        Self::from_laurent(LaurentPoly::zero())
    }
    fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
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

impl CanonicalText for RatFunc {
    const RING_TAG: &'static str = "ratfunc";

    fn to_text(&self) -> String {
        if self.den.is_one() {
            self.num.to_text()
        } else {
            format!("({})/({})", self.num.to_text(), self.den.to_text())
        }
    }

    fn from_text(s: &str) -> Result<Self> {
        let s = s.trim();
        let parsed = match s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(inner) => {
                let (n, d) = inner
                    .split_once(")/(")
                    .ok_or_else(|| Error::Parse(format!("not a rational function: {s:?}")))?;
                Self::new(LaurentPoly::from_text(n)?, LaurentPoly::from_text(d)?)?
            }
            None => Self::from_laurent(LaurentPoly::from_text(s)?),
        };
        if parsed.to_text() != s {
            return Err(Error::Parse(format!(
                "non-canonical rational function: {s:?}"
            )));
        }
        Ok(parsed)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn normalization_cancels_common_factor() {
        // (q^2 - 1) / (2q + 2) = (q - 1)/2
        let f = RatFunc::new(lp(&[(0, -1), (2, 1)]), lp(&[(0, 2), (1, 2)])).unwrap();
        assert_eq!(f.num(), &lp(&[(0, -1), (1, 1)]));
        assert_eq!(f.den(), &lp(&[(0, 2)]));
    }

    #[test]
    fn denominator_shifted_and_positive() {
        // q / (-q^3 - q) = -q^-... : 1 / (-(q^2 + 1)) -> -1 / (q^2 + 1)
        let f = RatFunc::new(lp(&[(1, 1)]), lp(&[(1, -1), (3, -1)])).unwrap();
        assert_eq!(f.num(), &lp(&[(0, -1)]));
        assert_eq!(f.den(), &lp(&[(0, 1), (2, 1)]));
        let g = RatFunc::new(lp(&[(0, 1)]), lp(&[(-2, 1), (0, 1)])).unwrap();
        assert_eq!(g.to_text(), "(1*q^2)/(1*q^0 + 1*q^2)");
        assert_eq!(RatFunc::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RatFunc::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn eval_rejects_vanishing_denominator() {
        let two_q = lp(&[(-1, 1), (1, 1)]);
        let f = RatFunc::from_laurent(two_q).inv().unwrap();
        // denominator q^2 + 1 vanishes nowhere on Q, but q = 0 is forbidden
        assert!(eval_at(&f, &BigRational::zero()).is_err());
        let g = RatFunc::new(LaurentPoly::one(), lp(&[(0, -1), (1, 1)])).unwrap();
        let err = eval_at(&g, &BigRational::from_integer(1.into())).unwrap_err();
        assert!(matches!(err, Error::DivisionByZero { .. }));
    }
}
