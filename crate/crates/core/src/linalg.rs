//! Sparse exact Gaussian elimination over a field.

use std::collections::BTreeMap;

use crate::ring::Field;

pub type SparseRow<F> = BTreeMap<usize, F>;

/// Reduced row echelon form: every row has a unit pivot at its first
/// column, no other row has an entry in a pivot column, rows sorted by pivot.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub rows: Vec<SparseRow<F>>,
}

impl<F: Field> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| *r.keys().next().unwrap())
            .collect()
    }
}

fn axpy<F: Field>(row: &mut SparseRow<F>, f: &F, other: &SparseRow<F>) {
    // row -= f * other
    for (&k, v) in other {
        let d = f.mul(v);
        match row.get_mut(&k) {
            Some(x) => {
                *x = x.sub(&d);
                if x.is_zero() {
                    row.remove(&k);
                }
            }
            None => {
                row.insert(k, d.neg());
            }
        }
    }
}

/// Brings `rows` to reduced row echelon form. Columns with smaller index
/// are eliminated first, so the pivot of a row is its smallest column.
pub fn rref<F: Field>(input: impl IntoIterator<Item = SparseRow<F>>) -> Echelon<F> {
    let mut pivot_rows: BTreeMap<usize, SparseRow<F>> = BTreeMap::new();
    for mut row in input {
        row.retain(|_, v| !v.is_zero());
        let mut cursor = 0;
        loop {
            let hit = row
                .range(cursor..)
                .map(|(k, _)| *k)
                .find(|k| pivot_rows.contains_key(k));
            let Some(k) = hit else { break };
            let f = row[&k].clone();
            axpy(&mut row, &f, &pivot_rows[&k]);
            cursor = k + 1;
        }
        if let Some((&lead, lv)) = row.iter().next() {
            let s = lv.inv();
            for v in row.values_mut() {
                *v = s.mul(v);
            }
            pivot_rows.insert(lead, row);
        }
    }
    let cols: Vec<usize> = pivot_rows.keys().rev().copied().collect();
    for &p in &cols {
        let prow = pivot_rows[&p].clone();
        for (_, row) in pivot_rows.range_mut(..p) {
            if let Some(f) = row.get(&p).cloned() {
                axpy(row, &f, &prow);
            }
        }
    }
    Echelon {
        rows: pivot_rows.into_values().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Rat, Ring};

    fn row(v: &[(usize, i64)]) -> SparseRow<Rat> {
        v.iter().map(|&(k, x)| (k, Rat::int(x))).collect()
    }

    #[test]
    fn rank_and_reduced_form() {
        let e = rref([
            row(&[(0, 1), (1, 2), (2, 3)]),
            row(&[(0, 2), (1, 4), (2, 6)]),
            row(&[(1, 1), (2, 1)]),
        ]);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots(), vec![0, 1]);
        // x0 + x2 = 0, x1 + x2 = 0
        assert_eq!(e.rows[0], row(&[(0, 1), (2, 1)]));
        assert_eq!(e.rows[1], row(&[(1, 1), (2, 1)]));
        assert!(e.rows.iter().all(|r| r.values().all(|v| !v.is_zero())));
    }
}
