use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::RwLock;

use super::ncpoly::{Generator, NCPoly, Word};
use crate::error::{Error, Result};
use crate::linalg::{rref, SparseRow};
use crate::qstruct::RHat;
use crate::ring::{RatFunc, Ring};
use crate::tensor::TensorOp;

/// `L` on one leg: entry `(a, b)` is the generator `l^a_b`.
pub fn l_matrix_op(n: usize) -> TensorOp<NCPoly> {
    let mut op = TensorOp::zero(n, 1);
    for g in Generator::all(n) {
        op.add_at(g.row as u64, g.col as u64, NCPoly::generator(g));
    }
    op
}

fn scalar_op(op: &TensorOp<crate::ring::LaurentPoly>) -> TensorOp<NCPoly> {
    op.map(|c| NCPoly::scalar(RatFunc::from_laurent(c.clone())))
}

/// Components of `L₁R̂L₁R̂ − R̂L₁R̂L₁` on two legs; only the nonzero ones, in key order.
pub fn derive_relations(n: usize) -> Result<Vec<NCPoly>> {
    let r = if n == 1 {
        RHat::unchecked(1)
    } else {
        RHat::build(n)?
    };
    let rr = scalar_op(r.op());
    let l1 = l_matrix_op(n).embed(1, 2)?;
    let lhs = l1.compose(&rr)?.compose(&l1)?.compose(&rr)?;
    let rhs = rr.compose(&l1)?.compose(&rr)?.compose(&l1)?;
    let diff = lhs.sub(&rhs)?;
    Ok(diff.entries().map(|(_, _, p)| p.clone()).collect())
}

/// Reduction strategy: which inversion to rewrite first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

trait Memo {
    fn get(&self, w: &Word) -> Option<NCPoly>;
    fn put(&self, w: Word, p: NCPoly);
}

struct SharedMemo<'a>(&'a RwLock<HashMap<Word, NCPoly>>);

impl Memo for SharedMemo<'_> {
    fn get(&self, w: &Word) -> Option<NCPoly> {
        self.0.read().expect("cache lock").get(w).cloned()
    }
    fn put(&self, w: Word, p: NCPoly) {
        self.0.write().expect("cache lock").insert(w, p);
    }
}

struct LocalMemo(RefCell<HashMap<Word, NCPoly>>);

impl Memo for LocalMemo {
    fn get(&self, w: &Word) -> Option<NCPoly> {
        self.0.borrow().get(w).cloned()
    }
    fn put(&self, w: Word, p: NCPoly) {
        self.0.borrow_mut().insert(w, p);
    }
}

type Tail = Vec<((Generator, Generator), RatFunc)>;

/// Exchange rules `g_a g_b -> Σ c · g_c g_d` for every inversion `g_a > g_b`,
/// with all tail words sorted.
///
/// Normal forms of words are memoised internally; the cache never changes a
/// result, so the system behaves as an immutable value.
pub struct RewriteSystem {
    n: usize,
    rank: usize,
    rules: BTreeMap<(Generator, Generator), Tail>,
    cache: RwLock<HashMap<Word, NCPoly>>,
}

impl std::fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RewriteSystem")
            .field("n", &self.n)
            .field("rules", &self.rules.len())
            .finish()
    }
}

impl RewriteSystem {
    /// Eliminates the homogeneous quadratic `relations` over the rational
    /// function field, leading words first in degree-lex order, and packages
    /// each reduced row as a rule. Fails unless the leading words are exactly
    /// the inversions.
    pub fn build(n: usize, relations: &[NCPoly]) -> Result<Self> {
        let mut words = Word::all_of_length(n, 2);
        words.reverse();
        let col: HashMap<Word, usize> = words.iter().cloned().zip(0..).collect();
        let mut rows: Vec<SparseRow<RatFunc>> = Vec::new();
        for rel in relations {
            let mut row = SparseRow::new();
            for (w, c) in rel.terms() {
                let k = col.get(w).ok_or_else(|| {
                    Error::InvalidInput(format!("relation is not homogeneous quadratic: word {w}"))
                })?;
                row.insert(*k, c.clone());
            }
            rows.push(row);
        }
        let ech = rref(rows);
        let leads: BTreeSet<Word> = ech.pivots().iter().map(|&p| words[p].clone()).collect();
        let inversions: BTreeSet<Word> = words.iter().filter(|w| !w.is_sorted()).cloned().collect();
        if leads != inversions {
            let missing: Vec<String> = inversions
                .difference(&leads)
                .map(|w| w.to_string())
                .collect();
            let extra: Vec<String> = leads
                .difference(&inversions)
                .map(|w| w.to_string())
                .collect();
            return Err(Error::PbwFailure(format!(
                "missing leading words {missing:?}, unexpected {extra:?}"
            )));
        }
        let mut rules = BTreeMap::new();
        for row in &ech.rows {
            let mut it = row.iter();
            let (&lead, _) = it.next().expect("nonempty row");
            let lw = &words[lead];
            let tail: Tail = it
                .map(|(&k, c)| {
                    let w = &words[k];
                    ((w.0[0], w.0[1]), c.neg_ref())
                })
                .collect();
            rules.insert((lw.0[0], lw.0[1]), tail);
        }
        Ok(Self {
            n,
            rank: ech.rank(),
            rules,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// Derives the relations for `N` and builds the rewrite system.
    pub fn for_rank(n: usize) -> Result<Self> {
        Self::build(n, &derive_relations(n)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the span of the input relations.
    pub fn relation_rank(&self) -> usize {
        self.rank
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    /// Rules in increasing order of their left-hand side.
    pub fn rules(&self) -> impl Iterator<Item = (Word, NCPoly)> + '_ {
        self.rules.iter().map(|(&(a, b), tail)| {
            let mut p = NCPoly::zero();
            for ((c, d), k) in tail {
                p.add_term(Word::from_slice(&[*c, *d]), k.clone());
            }
            (Word::from_slice(&[a, b]), p)
        })
    }

    /// Replaces the inversion at positions `k, k+1` of `w` by its rule tail.
    pub fn rewrite_at(&self, w: &Word, k: usize) -> NCPoly {
        let tail = &self.rules[&(w.0[k], w.0[k + 1])];
        let mut out = NCPoly::zero();
        for &((a, b), ref c) in tail {
            let mut v = w.0.clone();
            v[k] = a;
            v[k + 1] = b;
            out.add_term(Word(v), c.clone());
        }
        out
    }

    fn nf_word(&self, w: &Word, strategy: Strategy, memo: &dyn Memo) -> NCPoly {
        if w.is_sorted() {
            return NCPoly::term(w.clone(), RatFunc::one());
        }
        if let Some(p) = memo.get(w) {
            return p;
        }
        let k = match strategy {
            Strategy::Leftmost => w.leftmost_inversion(),
            Strategy::Rightmost => w.rightmost_inversion(),
        }
        .expect("unsorted word has an inversion");
        let mut acc = NCPoly::zero();
        for (v, c) in self.rewrite_at(w, k).terms() {
            let sub = self.nf_word(v, strategy, memo);
            for (u, d) in sub.terms() {
                acc.add_term(u.clone(), c.mul_ref(d));
            }
        }
        memo.put(w.clone(), acc.clone());
        acc
    }

    fn nf_with(&self, p: &NCPoly, strategy: Strategy, memo: &dyn Memo) -> NCPoly {
        let mut acc = NCPoly::zero();
        for (w, c) in p.terms() {
            if w.is_sorted() {
                acc.add_term(w.clone(), c.clone());
                continue;
            }
            for (u, d) in self.nf_word(w, strategy, memo).terms() {
                acc.add_term(u.clone(), c.mul_ref(d));
            }
        }
        acc
    }

    /// Canonical normal form: leftmost-inversion rewriting until every word is sorted.
    pub fn normal_form(&self, p: &NCPoly) -> NCPoly {
        self.nf_with(p, Strategy::Leftmost, &SharedMemo(&self.cache))
    }

    /// Normal form under an explicit strategy, with a private cache.
    pub fn normal_form_with(&self, p: &NCPoly, strategy: Strategy) -> NCPoly {
        if strategy == Strategy::Leftmost {
            return self.normal_form(p);
        }
        self.nf_with(p, strategy, &LocalMemo(RefCell::new(HashMap::new())))
    }

    /// `Ok(())` when `p` commutes with every generator modulo the relations,
    /// otherwise the first offending generator with the normal form of `[p, g]`.
    pub fn is_central(&self, p: &NCPoly) -> std::result::Result<(), (Generator, NCPoly)> {
        for g in Generator::all(self.n) {
            let gp = NCPoly::generator(g);
            let comm = self.normal_form(&p.mul(&gp).sub(&gp.mul(p)));
            if !comm.is_zero() {
                return Err((g, comm));
            }
        }
        Ok(())
    }

    /// Checks strategy independence on the given words: the leftmost and
    /// rightmost strategies agree, and every one-step reduct of a word has
    /// the same normal form as the word itself.
    pub fn check_confluence_on(&self, words: &[Word]) -> ConfluenceReport {
        let right = LocalMemo(RefCell::new(HashMap::new()));
        for w in words {
            let expected = self.normal_form(&NCPoly::term(w.clone(), RatFunc::one()));
            let r = self.nf_with(
                &NCPoly::term(w.clone(), RatFunc::one()),
                Strategy::Rightmost,
                &right,
            );
            if r != expected {
                return ConfluenceReport::failed(words.len(), w, expected, r);
            }
            for k in 0..w.len().saturating_sub(1) {
                if w.0[k] > w.0[k + 1] {
                    let alt = self.normal_form(&self.rewrite_at(w, k));
                    if alt != expected {
                        return ConfluenceReport::failed(words.len(), w, expected, alt);
                    }
                }
            }
        }
        ConfluenceReport {
            words_checked: words.len(),
            counterexample: None,
        }
    }

    /// Exhaustive check over all `N^{2d}` words of length `d`.
    pub fn check_confluence(&self, d: usize) -> ConfluenceReport {
        self.check_confluence_on(&Word::all_of_length(self.n, d))
    }
}

/// Outcome of a strategy-independence check.
#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub words_checked: usize,
    /// `(word, canonical normal form, differing normal form)`
    pub counterexample: Option<(Word, NCPoly, NCPoly)>,
}

impl ConfluenceReport {
    fn failed(n: usize, w: &Word, a: NCPoly, b: NCPoly) -> Self {
        Self {
            words_checked: n,
            counterexample: Some((w.clone(), a, b)),
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{eval_at, CanonicalText};
    use num_rational::BigRational;

    #[test]
    fn rank_one_system() {
        assert!(derive_relations(1).unwrap().is_empty());
        let rs = RewriteSystem::for_rank(1).unwrap();
        assert_eq!(rs.num_rules(), 0);
    }

    #[test]
    fn rule_counts() {
        for (n, expected) in [(2, 6), (3, 36)] {
            let rs = RewriteSystem::for_rank(n).unwrap();
            assert_eq!(rs.relation_rank(), expected);
            assert_eq!(rs.num_rules(), expected);
            for (lhs, tail) in rs.rules() {
                assert!(!lhs.is_sorted());
                assert!(tail.terms().all(|(w, _)| w.is_sorted() && w.len() == 2));
            }
        }
    }

    #[test]
    fn classical_limit_is_commutative() {
        let one = BigRational::from_integer(1.into());
        for n in [2, 3] {
            let rs = RewriteSystem::for_rank(n).unwrap();
            for (lhs, tail) in rs.rules() {
                let at1: Vec<_> = tail
                    .terms()
                    .map(|(w, c)| (w.clone(), eval_at(c, &one).unwrap()))
                    .filter(|(_, c)| *c != BigRational::from_integer(0.into()))
                    .collect();
                let swapped = Word::from_slice(&[lhs.0[1], lhs.0[0]]);
                assert_eq!(
                    at1,
                    vec![(swapped, one.clone())],
                    "rule {lhs}: {}",
                    tail.to_text()
                );
            }
        }
    }

    #[test]
    fn sorted_words_are_fixed() {
        let rs = RewriteSystem::for_rank(2).unwrap();
        let a = NCPoly::generator(Generator::new(0, 0));
        let b = NCPoly::generator(Generator::new(0, 1));
        assert_eq!(rs.normal_form(&a.mul(&b)), a.mul(&b));
        assert_eq!(rs.normal_form(&NCPoly::one()), NCPoly::one());
    }

    #[test]
    fn normal_form_kills_relations() {
        for n in [2, 3] {
            let rels = derive_relations(n).unwrap();
            let rs = RewriteSystem::build(n, &rels).unwrap();
            let mut mults = vec![NCPoly::one()];
            mults.extend(Generator::all(n).into_iter().map(NCPoly::generator));
            for r in &rels {
                for p in &mults {
                    assert!(rs.normal_form(&p.mul(r)).is_zero());
                    assert!(rs.normal_form(&r.mul(p)).is_zero());
                }
            }
        }
    }

    #[test]
    fn normal_form_is_idempotent() {
        let rs = RewriteSystem::for_rank(2).unwrap();
        for w in Word::all_of_length(2, 3) {
            let p = rs.normal_form(&NCPoly::term(w, RatFunc::one()));
            assert_eq!(rs.normal_form(&p), p);
            assert!(p.terms().all(|(w, _)| w.is_sorted()));
        }
    }

    #[test]
    fn confluence_degree_three() {
        let rs = RewriteSystem::for_rank(2).unwrap();
        let rep = rs.check_confluence(3);
        assert!(rep.passed());
        assert_eq!(rep.words_checked, 64);
        let rep = rs.check_confluence(4);
        assert!(rep.passed());
        assert_eq!(rep.words_checked, 256);
    }

    #[test]
    fn single_generator_not_central() {
        let rs = RewriteSystem::for_rank(2).unwrap();
        assert!(rs.is_central(&NCPoly::one()).is_ok());
        assert!(rs
            .is_central(&NCPoly::generator(Generator::new(0, 1)))
            .is_err());
    }

    #[test]
    fn mismatched_relations_rejected() {
        // a single relation cannot produce the full inversion set
        let a = NCPoly::generator(Generator::new(0, 0));
        let b = NCPoly::generator(Generator::new(0, 1));
        let rel = b.mul(&a).sub(&a.mul(&b));
        assert!(matches!(
            RewriteSystem::build(2, &[rel]),
            Err(Error::PbwFailure(_))
        ));
        assert!(RewriteSystem::build(2, std::slice::from_ref(&a)).is_err());
    }
}
