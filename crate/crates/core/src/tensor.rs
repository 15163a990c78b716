//! Sparse operators and cotensors on `k` tensor legs of dimension `N`.
//!
//! Multi-index components are 0-based in the Rust API and 1-based in dump
//! files; leg positions are 1-based everywhere, matching the usual
//! `R_{i,i+1}` subscripts. A multi-index is keyed by its row-major base-`N`
//! integer so maps iterate in canonical order.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{CanonicalText, Ring};

pub type Key = u64;

fn index_space(dim: usize, legs: usize) -> Key {
    (dim as Key).pow(legs as u32)
}

/// Row-major key of a multi-index.
pub fn encode(dim: usize, idx: &[usize]) -> Key {
    idx.iter().fold(0, |acc, &i| {
        debug_assert!(i < dim);
        acc * dim as Key + i as Key
    })
}

pub fn decode(dim: usize, legs: usize, mut key: Key) -> Vec<usize> {
    let mut out = vec![0; legs];
    for slot in out.iter_mut().rev() {
        *slot = (key % dim as Key) as usize;
        key /= dim as Key;
    }
    out
}

/// Linear operator on `legs` copies of an `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorOp<C> {
    dim: usize,
    legs: usize,
    entries: BTreeMap<(Key, Key), C>,
}

impl<C: Ring> TensorOp<C> {
    pub fn zero(dim: usize, legs: usize) -> Self {
        Self {
            dim,
            legs,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize, legs: usize) -> Self {
        Self::diagonal(dim, legs, C::one())
    }

    /// `c` times the identity.
    pub fn diagonal(dim: usize, legs: usize, c: C) -> Self {
        let mut op = Self::zero(dim, legs);
        if !c.is_zero() {
            for k in 0..index_space(dim, legs) {
                op.entries.insert((k, k), c.clone());
            }
        }
        op
    }

    pub fn from_entries(
        dim: usize,
        legs: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Vec<usize>, C)>,
    ) -> Result<Self> {
        let mut op = Self::zero(dim, legs);
        for (r, c, v) in entries {
            op.check_index(&r)?;
            op.check_index(&c)?;
            op.add_at(encode(dim, &r), encode(dim, &c), v);
        }
        Ok(op)
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.legs || idx.iter().any(|&i| i >= self.dim) {
            return Err(Error::ShapeMismatch(format!(
                "multi-index {idx:?} invalid for dim {} on {} legs",
                self.dim, self.legs
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: &[usize], col: &[usize]) -> Option<&C> {
        self.entries
            .get(&(encode(self.dim, row), encode(self.dim, col)))
    }

    pub fn get_key(&self, row: Key, col: Key) -> Option<&C> {
        self.entries.get(&(row, col))
    }

    /// Entries in canonical (row, col) key order.
    pub fn entries(&self) -> impl Iterator<Item = (Key, Key, &C)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Adds `v` into entry `(row, col)`, removing the entry if it cancels.
    pub fn add_at(&mut self, row: Key, col: Key, v: C) {
        if v.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry((row, col)) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&v);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.dim != other.dim || self.legs != other.legs {
            return Err(Error::ShapeMismatch(format!(
                "{what}: ({}, {}) vs ({}, {})",
                self.dim, self.legs, other.dim, other.legs
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "add")?;
        let mut out = self.clone();
        for (&k, v) in &other.entries {
            out.add_at(k.0, k.1, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    /// `c * self`, coefficient on the left of every entry.
    pub fn scale_left(&self, c: &C) -> Self {
        self.map(|v| c.mul(v))
    }

    /// `self * c`, coefficient on the right of every entry.
    pub fn scale_right(&self, c: &C) -> Self {
        self.map(|v| v.mul(c))
    }

    /// Applies `f` to every entry, dropping entries that become zero.
    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> TensorOp<D> {
        TensorOp {
            dim: self.dim,
            legs: self.legs,
            entries: self
                .entries
                .iter()
                .filter_map(|(&k, v)| {
                    let w = f(v);
                    (!w.is_zero()).then_some((k, w))
                })
                .collect(),
        }
    }

    /// Parallel variant of [`TensorOp::map`]; result is assembled in key order.
    pub fn par_map<D: Ring>(&self, f: impl Fn(&C) -> D + Sync) -> TensorOp<D> {
        let items: Vec<_> = self.entries.iter().collect();
        let mapped: Vec<_> = items
            .par_iter()
            .filter_map(|(&k, v)| {
                let w = f(v);
                (!w.is_zero()).then_some((k, w))
            })
            .collect();
        TensorOp {
            dim: self.dim,
            legs: self.legs,
            entries: mapped.into_iter().collect(),
        }
    }

    /// Places `self` on legs `start..start+m-1` of a `total`-leg space,
    /// acting as the identity elsewhere.
    pub fn embed(&self, start: usize, total: usize) -> Result<Self> {
        let m = self.legs;
        if start == 0 || start + m - 1 > total {
            return Err(Error::InvalidInput(format!(
                "cannot place a {m}-leg operator at leg {start} of {total}"
            )));
        }
        let below = index_space(self.dim, total - (start + m - 1));
        let above = index_space(self.dim, start - 1);
        let inner = index_space(self.dim, m);
        let mut out = Self::zero(self.dim, total);
        for (&(r, c), v) in &self.entries {
            for hi in 0..above {
                for lo in 0..below {
                    let row = (hi * inner + r) * below + lo;
                    let col = (hi * inner + c) * below + lo;
                    out.entries.insert((row, col), v.clone());
                }
            }
        }
        Ok(out)
    }

    /// Operator product `self · other`; entries multiply as `self_entry * other_entry`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "compose")?;
        let mut by_row: HashMap<Key, Vec<(Key, &C)>> = HashMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut rows: Vec<(Key, Vec<(Key, &C)>)> = Vec::new();
        for (&(r, c), v) in &self.entries {
            match rows.last_mut() {
                Some((lr, items)) if *lr == r => items.push((c, v)),
                _ => rows.push((r, vec![(c, v)])),
            }
        }
        let computed: Vec<(Key, BTreeMap<Key, C>)> = rows
            .par_iter()
            .map(|(r, items)| {
                let mut acc: BTreeMap<Key, C> = BTreeMap::new();
                for (mid, a) in items {
                    if let Some(bs) = by_row.get(mid) {
                        for (col, b) in bs {
                            let p = a.mul(b);
                            if p.is_zero() {
                                continue;
                            }
                            match acc.get_mut(col) {
                                Some(x) => x.add_assign(&p),
                                None => {
                                    acc.insert(*col, p);
                                }
                            }
                        }
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                (*r, acc)
            })
            .collect();
        let mut out = Self::zero(self.dim, self.legs);
        for (r, acc) in computed {
            for (c, v) in acc {
                out.entries.insert((r, c), v);
            }
        }
        Ok(out)
    }

    /// `self^k` by repeated composition.
    pub fn power(&self, k: u32) -> Result<Self> {
        let mut acc = Self::identity(self.dim, self.legs);
        for _ in 0..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Contracts leg `leg` against itself with weights `w`:
    /// `out^{I}_{J} = Σ_a w_a X^{I,a}_{J,a}` with `a` inserted at `leg`.
    pub fn partial_trace(&self, leg: usize, w: &[C]) -> Result<Self> {
        if leg == 0 || leg > self.legs || w.len() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "partial trace over leg {leg} of {} legs with {} weights",
                self.legs,
                w.len()
            )));
        }
        let mut out = Self::zero(self.dim, self.legs - 1);
        for (&(r, c), v) in &self.entries {
            let ri = decode(self.dim, self.legs, r);
            let ci = decode(self.dim, self.legs, c);
            if ri[leg - 1] != ci[leg - 1] {
                continue;
            }
            let a = ri[leg - 1];
            let mut rr = ri;
            rr.remove(leg - 1);
            let mut cc = ci;
            cc.remove(leg - 1);
            out.add_at(encode(self.dim, &rr), encode(self.dim, &cc), w[a].mul(v));
        }
        Ok(out)
    }
}

/// Rank-`legs` tensor used as a row or column vector against a [`TensorOp`].
#[derive(Clone, Debug, PartialEq)]
pub struct CoTensor<C> {
    dim: usize,
    legs: usize,
    entries: BTreeMap<Key, C>,
}

impl<C: Ring> CoTensor<C> {
    pub fn zero(dim: usize, legs: usize) -> Self {
        Self {
            dim,
            legs,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        dim: usize,
        legs: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, C)>,
    ) -> Result<Self> {
        let mut v = Self::zero(dim, legs);
        for (idx, c) in entries {
            if idx.len() != legs || idx.iter().any(|&i| i >= dim) {
                return Err(Error::ShapeMismatch(format!("multi-index {idx:?}")));
            }
            v.add_at(encode(dim, &idx), c);
        }
        Ok(v)
    }

    /// The basis tensor `e_{idx}`.
    pub fn basis(dim: usize, idx: &[usize]) -> Self {
        let mut v = Self::zero(dim, idx.len());
        v.entries.insert(encode(dim, idx), C::one());
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> Option<&C> {
        self.entries.get(&encode(self.dim, idx))
    }

    pub fn get_key(&self, k: Key) -> Option<&C> {
        self.entries.get(&k)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Key, &C)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn add_at(&mut self, key: Key, v: C) {
        if v.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry(key) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&v);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_shape(&self, dim: usize, legs: usize, what: &str) -> Result<()> {
        if self.dim != dim || self.legs != legs {
            return Err(Error::ShapeMismatch(format!(
                "{what}: ({}, {}) vs ({dim}, {legs})",
                self.dim, self.legs
            )));
        }
        Ok(())
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> CoTensor<D> {
        CoTensor {
            dim: self.dim,
            legs: self.legs,
            entries: self
                .entries
                .iter()
                .filter_map(|(&k, v)| {
                    let w = f(v);
                    (!w.is_zero()).then_some((k, w))
                })
                .collect(),
        }
    }

    pub fn scale_left(&self, c: &C) -> Self {
        self.map(|v| c.mul(v))
    }

    pub fn scale_right(&self, c: &C) -> Self {
        self.map(|v| v.mul(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        other.check_shape(self.dim, self.legs, "add")?;
        let mut out = self.clone();
        for (&k, v) in &other.entries {
            out.add_at(k, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        other.check_shape(self.dim, self.legs, "sub")?;
        let mut out = self.clone();
        for (&k, v) in &other.entries {
            out.add_at(k, v.neg());
        }
        Ok(out)
    }
}

/// `(vA)_J = Σ_I v_I A^I_J`, products taken as `v_I * A^I_J`.
pub fn contract_left<C: Ring>(v: &CoTensor<C>, op: &TensorOp<C>) -> Result<CoTensor<C>> {
    v.check_shape(op.dim, op.legs, "contract_left")?;
    let mut out = CoTensor::zero(op.dim, op.legs);
    for (&(r, c), a) in &op.entries {
        if let Some(x) = v.entries.get(&r) {
            out.add_at(c, x.mul(a));
        }
    }
    Ok(out)
}

/// `(Av)^I = Σ_J A^I_J v_J`, products taken as `A^I_J * v_J`.
pub fn contract_right<C: Ring>(op: &TensorOp<C>, v: &CoTensor<C>) -> Result<CoTensor<C>> {
    v.check_shape(op.dim, op.legs, "contract_right")?;
    let mut out = CoTensor::zero(op.dim, op.legs);
    for (&(r, c), a) in &op.entries {
        if let Some(x) = v.entries.get(&c) {
            out.add_at(r, a.mul(x));
        }
    }
    Ok(out)
}

/// `Σ_I u_I v_I`.
pub fn full_pairing<C: Ring>(u: &CoTensor<C>, v: &CoTensor<C>) -> Result<C> {
    v.check_shape(u.dim, u.legs, "full_pairing")?;
    let mut acc = C::zero();
    for (k, a) in &u.entries {
        if let Some(b) = v.entries.get(k) {
            acc.add_assign(&a.mul(b));
        }
    }
    Ok(acc)
}

/// Gram tensor `G^{A,B} = Σ_C u^{A C} v^{B C}` where `C` runs over the
/// `shared` legs and `A`, `B` over the remaining legs in their original order.
pub fn partial_pairing<C: Ring>(
    u: &CoTensor<C>,
    v: &CoTensor<C>,
    shared: &[usize],
) -> Result<TensorOp<C>> {
    v.check_shape(u.dim, u.legs, "partial_pairing")?;
    let mut mask = vec![false; u.legs];
    for &l in shared {
        if l == 0 || l > u.legs || mask[l - 1] {
            return Err(Error::InvalidInput(format!(
                "invalid shared leg set {shared:?} for {} legs",
                u.legs
            )));
        }
        mask[l - 1] = true;
    }
    let split = |key: Key| {
        let idx = decode(u.dim, u.legs, key);
        let (open, closed): (Vec<_>, Vec<_>) = idx.iter().zip(&mask).partition(|(_, &m)| !m);
        let open: Vec<usize> = open.into_iter().map(|(i, _)| *i).collect();
        let closed: Vec<usize> = closed.into_iter().map(|(i, _)| *i).collect();
        (encode(u.dim, &open), encode(u.dim, &closed))
    };
    let mut v_by_closed: HashMap<Key, Vec<(Key, &C)>> = HashMap::new();
    for (&k, b) in &v.entries {
        let (o, c) = split(k);
        v_by_closed.entry(c).or_default().push((o, b));
    }
    let open_legs = u.legs - shared.len();
    let mut out = TensorOp::zero(u.dim, open_legs);
    for (&k, a) in &u.entries {
        let (o, c) = split(k);
        if let Some(bs) = v_by_closed.get(&c) {
            for (ob, b) in bs {
                out.add_at(o, *ob, a.mul(b));
            }
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct TensorFile {
    dim: usize,
    legs: usize,
    ring: String,
    entries: Vec<EntryFile>,
}

#[derive(Serialize, Deserialize)]
struct EntryFile {
    row: Vec<usize>,
    col: Vec<usize>,
    coeff: String,
}

fn to_one_based(v: Vec<usize>) -> Vec<usize> {
    v.into_iter().map(|i| i + 1).collect()
}

fn from_one_based(v: &[usize]) -> Result<Vec<usize>> {
    v.iter()
        .map(|&i| {
            i.checked_sub(1)
                .ok_or_else(|| Error::Parse("multi-index components are 1-based".into()))
        })
        .collect()
}

fn write_file(f: &TensorFile) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("tensor file serializes");
    s.push('\n');
    s
}

impl<C: Ring + CanonicalText> TensorOp<C> {
    /// Serializes to the operator dump format.
    pub fn to_json(&self) -> String {
        write_file(&TensorFile {
            dim: self.dim,
            legs: self.legs,
            ring: C::RING_TAG.into(),
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| EntryFile {
                    row: to_one_based(decode(self.dim, self.legs, r)),
                    col: to_one_based(decode(self.dim, self.legs, c)),
                    coeff: v.to_text(),
                })
                .collect(),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: TensorFile = serde_json::from_str(s)?;
        if f.ring != C::RING_TAG {
            return Err(Error::Parse(format!(
                "ring tag {:?}, expected {:?}",
                f.ring,
                C::RING_TAG
            )));
        }
        let entries = f
            .entries
            .iter()
            .map(|e| {
                Ok((
                    from_one_based(&e.row)?,
                    from_one_based(&e.col)?,
                    C::from_text(&e.coeff)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(f.dim, f.legs, entries)
    }
}

impl<C: Ring + CanonicalText> CoTensor<C> {
    /// Same file format as operators, with every `col` empty.
    pub fn to_json(&self) -> String {
        write_file(&TensorFile {
            dim: self.dim,
            legs: self.legs,
            ring: C::RING_TAG.into(),
            entries: self
                .entries
                .iter()
                .map(|(&k, v)| EntryFile {
                    row: to_one_based(decode(self.dim, self.legs, k)),
                    col: Vec::new(),
                    coeff: v.to_text(),
                })
                .collect(),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: TensorFile = serde_json::from_str(s)?;
        if f.ring != C::RING_TAG {
            return Err(Error::Parse(format!("ring tag {:?}", f.ring)));
        }
        let entries = f
            .entries
            .iter()
            .map(|e| {
                if !e.col.is_empty() {
                    return Err(Error::Parse("cotensor entries carry no col".into()));
                }
                Ok((from_one_based(&e.row)?, C::from_text(&e.coeff)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(f.dim, f.legs, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::LaurentPoly;

    type Op = TensorOp<LaurentPoly>;

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::constant(v)
    }

    #[test]
    fn embed_identity_is_identity() {
        let id1 = Op::identity(2, 1);
        assert_eq!(id1.embed(1, 3).unwrap(), Op::identity(2, 3));
        assert!(id1.embed(4, 3).is_err());
        assert!(id1.embed(0, 3).is_err());
    }

    #[test]
    fn embed_places_on_middle_legs() {
        let x = Op::from_entries(2, 2, [(vec![0, 1], vec![1, 0], c(7))]).unwrap();
        let e = x.embed(2, 3).unwrap();
        assert_eq!(e.nnz(), 2);
        for a in 0..2 {
            assert_eq!(e.get(&[a, 0, 1], &[a, 1, 0]), Some(&c(7)));
        }
    }

    #[test]
    fn compose_matches_brute_force_sum() {
        let a =
            Op::from_entries(2, 1, [(vec![0], vec![1], c(2)), (vec![1], vec![1], c(3))]).unwrap();
        let b =
            Op::from_entries(2, 1, [(vec![1], vec![0], c(5)), (vec![0], vec![0], c(1))]).unwrap();
        let ab = a.compose(&b).unwrap();
        // [[0,2],[0,3]] * [[1,0],[5,0]] = [[10,0],[15,0]]
        assert_eq!(ab.get(&[0], &[0]), Some(&c(10)));
        assert_eq!(ab.get(&[1], &[0]), Some(&c(15)));
        assert_eq!(ab.nnz(), 2);
        assert!(a.compose(&Op::identity(2, 2)).is_err());
        assert_eq!(Op::identity(2, 1).compose(&a).unwrap(), a);
    }

    #[test]
    fn cancellation_drops_entries() {
        let a = Op::identity(2, 1);
        assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn pairings_basic() {
        let e = CoTensor::<LaurentPoly>::basis(3, &[0, 1, 2]);
        assert!(full_pairing(&e, &e).unwrap().is_one());
        let all = partial_pairing(&e, &e, &[1, 2, 3]).unwrap();
        assert_eq!(all.legs(), 0);
        assert!(all.get(&[], &[]).unwrap().is_one());
        let outer = partial_pairing(&e, &e, &[]).unwrap();
        assert_eq!(outer.nnz(), 1);
        assert!(partial_pairing(&e, &e, &[2, 2]).is_err());
        assert!(partial_pairing(&e, &e, &[4]).is_err());
    }

    #[test]
    fn dump_format_shape() {
        let x = Op::from_entries(2, 1, [(vec![1], vec![0], LaurentPoly::lambda())]).unwrap();
        let s = x.to_json();
        assert!(s.contains("\"ring\": \"laurent\""));
        assert!(s.contains("\"coeff\": \"-1*q^-1 + 1*q^1\""));
        let back = Op::from_json(&s).unwrap();
        assert_eq!(back, x);
        assert_eq!(back.to_json(), s);
    }
}
