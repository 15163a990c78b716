//! Dense univariate integer polynomial helpers (ascending coefficients).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(p: &[BigInt]) -> Vec<BigInt> {
    let c = content(p);
    if c.is_zero() {
        return Vec::new();
    }
    let sign = if p.last().is_some_and(|l| l.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let c = c * sign;
    p.iter().map(|x| x / &c).collect()
}

/// lc(b)^(deg a - deg b + 1) * a mod b
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &lr * bc;
        }
        trim(&mut r);
    }
    r
}

/// Greatest common divisor with positive leading coefficient, content included.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return primitive_with_content(b);
    }
    if b.is_empty() {
        return primitive_with_content(a);
    }
    let c = content(a).gcd(&content(b));
    if a.len() == 1 || b.len() == 1 {
        return vec![c];
    }
    let (mut f, mut g) = if a.len() >= b.len() {
        (primitive(a), primitive(b))
    } else {
        (primitive(b), primitive(a))
    };
    while !g.is_empty() {
        if g.len() == 1 {
            return vec![c];
        }
        let r = pseudo_rem(&f, &g);
        f = g;
        g = primitive(&r);
    }
    let f = primitive(&f);
    f.into_iter().map(|x| x * &c).collect()
}

fn primitive_with_content(p: &[BigInt]) -> Vec<BigInt> {
    let mut v = p.to_vec();
    trim(&mut v);
    if v.last().is_some_and(|l| l.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

/// Exact quotient `a / b` in Z[q], or `None` when `b` does not divide `a`.
pub(crate) fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert!(!b.is_empty(), "exact_div by zero polynomial");
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let (qc, rem) = r[dr].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &qc * bc;
        }
        quot[shift] = qc;
        trim(&mut r);
    }
    if r.is_empty() {
        trim(&mut quot);
        Some(quot)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_of_products() {
        // (1 + q)(2 - q) and (1 + q)(3 + q^2)
        let a = p(&[2, 1, -1]);
        let b = p(&[3, 3, 1, 1]);
        assert_eq!(gcd(&a, &b), p(&[1, 1]));
        assert_eq!(gcd(&p(&[4, 4]), &p(&[6, 6])), p(&[2, 2]));
        assert_eq!(gcd(&p(&[3]), &p(&[1, 1])), p(&[1]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[2, 1, -1]);
        assert_eq!(exact_div(&a, &p(&[1, 1])), Some(p(&[2, -1])));
        assert_eq!(exact_div(&a, &p(&[1, 2])), None);
    }
}
