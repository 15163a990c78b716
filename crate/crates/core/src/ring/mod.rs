//! Exact coefficient arithmetic.
//!
//! Everything in the engine is built over integer Laurent polynomials in a
//! formal variable `q` and their field of fractions. The [`Ring`] contract is
//! what the tensor and matrix code is generic over; noncommutative rings set
//! [`Ring::COMMUTATIVE`] to `false` and always multiply in operand order.

mod laurent;
mod qcomb;
mod ratfunc;
mod upoly;
mod xpoly;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub use laurent::LaurentPoly;
pub use qcomb::{qbinom, qfact, qnum};
pub use ratfunc::{eval_at, RatFunc};
pub use xpoly::XPoly;

use crate::error::Result;

/// Minimal ring contract used by the tensor engine.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    /// `false` for rings where `a * b != b * a` in general.
    const COMMUTATIVE: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }

    fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Stable text form used in dump files and certificates.
pub trait CanonicalText: Sized {
    /// Tag written into the `ring` field of tensor dump files.
    const RING_TAG: &'static str;
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Result<Self>;
}

/// Parses `a/b` or `a` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || crate::error::Error::Parse(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Fields: rings where every nonzero element has an inverse.
pub trait Field: Ring {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
}

impl Field for RatFunc {
    fn inv(&self) -> Self {
        RatFunc::inv(self).expect("inverse of nonzero rational function")
    }
}

/// Exact rationals as a [`Ring`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn int(v: i64) -> Self {
        Rat(BigRational::from_integer(v.into()))
    }
}

impl Ring for Rat {
    const COMMUTATIVE: bool = true;
    fn zero() -> Self {
        Rat(Zero::zero())
    }
    fn one() -> Self {
        Rat(num_traits::One::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        Rat(&self.0 + &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rat(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Rat(-&self.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Rat(&self.0 - &other.0)
    }
}

impl Field for Rat {
    fn inv(&self) -> Self {
        Rat(self.0.recip())
    }
}
