//! q-numbers, q-factorials and q-binomials.

use num_bigint::BigInt;

use super::{LaurentPoly, RatFunc};
use crate::error::{Error, Result};

/// `p_q = (q^p - q^{-p}) / (q - q^{-1})`.
pub fn qnum(p: i64) -> LaurentPoly {
    let p = i32::try_from(p).expect("q-number index fits in i32");
    let top = LaurentPoly::from_terms([(p, BigInt::from(1)), (-p, BigInt::from(-1))]);
    top.exact_div(&LaurentPoly::lambda())
        .expect("q - q^-1 divides q^p - q^-p")
}

/// `p_q! = 1_q 2_q ... p_q`, with `0_q! = 1`.
pub fn qfact(p: u32) -> LaurentPoly {
    (1..=i64::from(p)).fold(LaurentPoly::one(), |acc, k| acc.mul_ref(&qnum(k)))
}

/// `n_q! / (k_q! (n-k)_q!)`; always a Laurent polynomial.
pub fn qbinom(n: i64, k: i64) -> Result<RatFunc> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::InvalidInput(format!(
            "q-binomial needs 0 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    let den = qfact(k as u32).mul_ref(&qfact((n - k) as u32));
    let r = RatFunc::new(qfact(n as u32), den)?;
    debug_assert!(
        r.as_laurent().is_some(),
        "q-binomial must be a Laurent polynomial"
    );
    Ok(r)
}
