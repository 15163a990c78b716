use rayon::prelude::*;

use super::ncpoly::{Generator, NCPoly};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// Square matrix over a possibly noncommutative ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<C> {
    n: usize,
    entries: Vec<C>,
}

impl<C: Ring> Matrix<C> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![C::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C) -> Self {
        Self {
            n,
            entries: (0..n * n).map(|k| f(k / n, k % n)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Ring::is_zero)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D + Sync + Send) -> Matrix<D> {
        Matrix {
            n: self.n,
            entries: self.entries.par_iter().map(&f).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    /// `c · A`, coefficient on the left of each entry.
    pub fn scale_left(&self, c: &C) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|a| c.mul(a)).collect(),
        }
    }

    /// `A · c`, coefficient on the right of each entry.
    pub fn scale_right(&self, c: &C) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// `Σ_k A_{ik} B_{kj}` with operand order preserved in each product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_reduced(other, |c| c.clone())
    }

    /// Product followed by `reduce` on every entry.
    pub fn mul_reduced(&self, other: &Self, reduce: impl Fn(&C) -> C + Sync) -> Result<Self> {
        self.check(other)?;
        let n = self.n;
        let entries = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let mut acc = C::zero();
                for m in 0..n {
                    let a = self.get(i, m);
                    let b = other.get(m, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                reduce(&acc)
            })
            .collect();
        Ok(Self { n, entries })
    }

    pub fn pow(&self, k: u32) -> Self {
        self.pow_reduced(k, |c| c.clone())
    }

    pub fn pow_reduced(&self, k: u32, reduce: impl Fn(&C) -> C + Sync) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.mul_reduced(self, &reduce).expect("same shape");
        }
        acc
    }
}

impl Matrix<NCPoly> {
    /// The generator matrix `L`.
    pub fn generators(n: usize) -> Self {
        Self::from_fn(n, |i, j| NCPoly::generator(Generator::new(i, j)))
    }
}
