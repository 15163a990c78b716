use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ring::{CanonicalText, RatFunc, Ring};

/// The generator `l^i_j`, the `(i, j)` entry of the quantum matrix `L`.
///
/// Stored 0-based; ordered row-major, i.e. `(i, j) < (k, l)` iff `i < k`
/// or `i = k` and `j < l`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Generator {
    pub row: u8,
    pub col: u8,
}

impl Generator {
    pub fn new(row: usize, col: usize) -> Self {
        Self {
            row: row as u8,
            col: col as u8,
        }
    }

    /// All `N²` generators in increasing order.
    pub fn all(n: usize) -> Vec<Generator> {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| Generator::new(i, j)))
            .collect()
    }

    pub fn name(&self) -> String {
        format!("l_{}_{}", self.row + 1, self.col + 1)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a generator: {s:?}"));
        let rest = s.strip_prefix("l_").ok_or_else(bad)?;
        let (i, j) = rest.split_once('_').ok_or_else(bad)?;
        let i: usize = i.parse().map_err(|_| bad())?;
        let j: usize = j.parse().map_err(|_| bad())?;
        if i == 0 || j == 0 || i > 255 || j > 255 {
            return Err(bad());
        }
        Ok(Generator::new(i - 1, j - 1))
    }
}

/// A monomial: a finite sequence of generators, ordered degree-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub SmallVec<[Generator; 6]>);

impl Word {
    pub fn unit() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_slice(g: &[Generator]) -> Self {
        Word(SmallVec::from_slice(g))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Nondecreasing, i.e. free of inversions.
    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn leftmost_inversion(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] > w[1])
    }

    pub fn rightmost_inversion(&self) -> Option<usize> {
        self.0.windows(2).rposition(|w| w[0] > w[1])
    }

    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(Generator::name).collect()
    }

    /// Every word of length `d` over `N²` generators, in increasing order.
    pub fn all_of_length(n: usize, d: usize) -> Vec<Word> {
        let gens = Generator::all(n);
        let mut out = vec![Word::unit()];
        for _ in 0..d {
            out = out
                .iter()
                .flat_map(|w| {
                    gens.iter().map(move |g| {
                        let mut v = w.0.clone();
                        v.push(*g);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&self.names().join("*"))
    }
}

/// Noncommutative polynomial in the generators with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, RatFunc>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: RatFunc) -> Self {
        Self::term(Word::unit(), c)
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(Word::from_slice(&[g]), RatFunc::one())
    }

    pub fn term(w: Word, c: RatFunc) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &RatFunc)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Option<&RatFunc> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Largest word in degree-lex order.
    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    /// The coefficient when `self` is a multiple of the unit word.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&Word::unit()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, v)| (w.clone(), c.mul_ref(v)))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

impl Ring for NCPoly {
    const COMMUTATIVE: bool = false;

    fn zero() -> Self {
        NCPoly::zero()
    }

    fn one() -> Self {
        NCPoly::scalar(RatFunc::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    fn add_assign(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca.mul_ref(cb));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.neg_ref()))
                .collect(),
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b' ' if depth == 0 && s[i..].starts_with(" + ") => {
                parts.push(&s[start..i]);
                start = i + 3;
                i += 3;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(&s[start..]);
    parts
}

impl CanonicalText for NCPoly {
    const RING_TAG: &'static str = "ncpoly";

    /// `[coeff]*l_1_1*l_2_1 + ...` in increasing word order; `[coeff]` alone for the unit word.
    fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| {
                if w.is_empty() {
                    format!("[{}]", c.to_text())
                } else {
                    format!("[{}]*{}", c.to_text(), w)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn from_text(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || Error::Parse(format!("not a noncommutative polynomial: {s:?}"));
        let mut out = Self::zero();
        for part in split_top_level(s) {
            let rest = part.strip_prefix('[').ok_or_else(bad)?;
            let close = rest.find(']').ok_or_else(bad)?;
            let c = RatFunc::from_text(&rest[..close])?;
            let tail = &rest[close + 1..];
            let word = if tail.is_empty() {
                Word::unit()
            } else {
                let gens = tail
                    .strip_prefix('*')
                    .ok_or_else(bad)?
                    .split('*')
                    .map(Generator::parse)
                    .collect::<Result<Vec<_>>>()?;
                Word::from_slice(&gens)
            };
            out.add_term(word, c);
        }
        if out.to_text() != s {
            return Err(Error::Parse(format!(
                "non-canonical polynomial text: {s:?}"
            )));
        }
        Ok(out)
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly({})", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_order_is_degree_lex() {
        let a = Generator::new(0, 0);
        let b = Generator::new(0, 1);
        let c = Generator::new(1, 0);
        assert!(a < b && b < c);
        assert!(Word::from_slice(&[c]) < Word::from_slice(&[a, a]));
        assert!(Word::from_slice(&[a, c]) < Word::from_slice(&[b, a]));
        assert!(Word::from_slice(&[a, b]).is_sorted());
        assert_eq!(
            Word::from_slice(&[b, a, c, a]).leftmost_inversion(),
            Some(0)
        );
        assert_eq!(
            Word::from_slice(&[b, a, c, a]).rightmost_inversion(),
            Some(2)
        );
        assert_eq!(Word::all_of_length(2, 3).len(), 64);
    }

    #[test]
    fn product_preserves_order() {
        let x = NCPoly::generator(Generator::new(0, 0));
        let y = NCPoly::generator(Generator::new(0, 1));
        let xy = x.mul(&y);
        assert_eq!(xy.to_text(), "[1*q^0]*l_1_1*l_1_2");
        assert_ne!(xy, y.mul(&x));
    }

    #[test]
    fn text_round_trip() {
        let x = NCPoly::generator(Generator::new(1, 0));
        let p = x
            .mul(&x)
            .scale(&RatFunc::from_laurent(crate::ring::LaurentPoly::lambda()))
            .add(&NCPoly::scalar(RatFunc::from_int(-3)));
        let t = p.to_text();
        assert_eq!(t, "[-3*q^0] + [-1*q^-1 + 1*q^1]*l_2_1*l_2_1");
        assert_eq!(NCPoly::from_text(&t).unwrap(), p);
        assert!(NCPoly::from_text("[1*q^0]*m_1").is_err());
    }
}
