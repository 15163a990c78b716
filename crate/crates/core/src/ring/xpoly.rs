use super::Ring;

/// Polynomial in a central scalar variable `x` over a ring `C`;
/// `coeffs[k]` multiplies `x^k`. No trailing zero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct XPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> XPoly<C> {
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c x^k`
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![C::zero(); k];
        v.push(c);
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl<C: Ring> Ring for XPoly<C> {
    const COMMUTATIVE: bool = C::COMMUTATIVE;

    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn one() -> Self {
        Self::constant(C::one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j].add_assign(&a.mul(b));
            }
        }
        Self::from_coeffs(v)
    }

    fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::LaurentPoly;

    #[test]
    fn x_polynomial_product() {
        // (1 - x)(1 + x) = 1 - x^2
        let a = XPoly::from_coeffs(vec![LaurentPoly::one(), LaurentPoly::constant(-1)]);
        let b = XPoly::from_coeffs(vec![LaurentPoly::one(), LaurentPoly::one()]);
        let p = a.mul(&b);
        assert_eq!(p.degree(), Some(2));
        assert!(p.coeff(1).is_zero());
        assert_eq!(p.coeff(2), LaurentPoly::constant(-1));
        assert!(a.sub(&a).is_zero());
    }
}
