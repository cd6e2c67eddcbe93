//! Exact sparse Gaussian elimination over a cyclotomic field.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::exactalg::{Cyclo, CycloField};

pub type SparseRow = BTreeMap<usize, Cyclo>;

/// Row-echelon form built incrementally; each stored row has leading coefficient 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Arc<CycloField>,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(field: &Arc<CycloField>) -> Self {
        Echelon { field: field.clone(), pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        row.retain(|_, v| !v.is_zero());
        let mut floor = 0;
        loop {
            let Some((&lead, c)) = row.range(floor..).next() else { break };
            let Some(piv) = self.pivots.get(&lead) else {
                floor = lead + 1;
                continue;
            };
            let c = c.clone();
            for (&j, v) in piv {
                let t = v.mul(&c);
                let nv = match row.get(&j) {
                    Some(old) => old.sub(&t),
                    None => t.neg(),
                };
                if nv.is_zero() {
                    row.remove(&j);
                } else {
                    row.insert(j, nv);
                }
            }
        }
        row
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((&lead, c)) = row.iter().find(|(j, _)| !self.pivots.contains_key(j)) else {
            return false;
        };
        let inv = c.inv().expect("nonzero pivot");
        let normalized: SparseRow = row.iter().map(|(&j, v)| (j, v.mul(&inv))).collect();
        // Keep every stored row free of the new pivot column.
        let keys: Vec<usize> = self.pivots.keys().copied().collect();
        for k in keys {
            let Some(f) = self.pivots[&k].get(&lead).cloned() else { continue };
            let prow = self.pivots.get_mut(&k).expect("pivot row");
            for (&j, v) in &normalized {
                let t = v.mul(&f);
                let nv = match prow.get(&j) {
                    Some(old) => old.sub(&t),
                    None => t.neg(),
                };
                if nv.is_zero() {
                    prow.remove(&j);
                } else {
                    prow.insert(j, nv);
                }
            }
        }
        self.pivots.insert(lead, normalized);
        true
    }

    /// A basis of the solutions of `row . v = 0` over columns `0..ncols`.
    pub fn nullspace(&self, ncols: usize) -> Vec<Vec<Cyclo>> {
        let zero = Cyclo::zero(&self.field);
        (0..ncols)
            .filter(|j| !self.pivots.contains_key(j))
            .map(|free| {
                let mut v = alloc::vec![zero.clone(); ncols];
                v[free] = Cyclo::one(&self.field);
                for (&p, row) in &self.pivots {
                    if let Some(c) = row.get(&free) {
                        v[p] = c.neg();
                    }
                }
                v
            })
            .collect()
    }
}

/// Rank of a set of sparse rows.
pub fn rank_of(field: &Arc<CycloField>, rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new(field);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn row(field: &Arc<CycloField>, items: &[(usize, i64)]) -> SparseRow {
        items.iter().map(|&(j, c)| (j, Cyclo::from_int(field, BigInt::from(c)))).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let f = CycloField::new(3).unwrap();
        let mut e = Echelon::new(&f);
        assert!(e.insert(row(&f, &[(0, 1), (1, 2), (2, 3)])));
        assert!(e.insert(row(&f, &[(0, 2), (1, 4), (2, 7)])));
        assert!(!e.insert(row(&f, &[(0, 3), (1, 6), (2, 10)])));
        assert_eq!(e.rank(), 2);
        let ker = e.nullspace(3);
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        let dot = |r: &[i64]| {
            r.iter().zip(v).fold(Cyclo::zero(&f), |acc, (&c, x)| acc.add(&x.scale(&BigInt::from(c).into())))
        };
        assert!(dot(&[1, 2, 3]).is_zero());
        assert!(dot(&[2, 4, 7]).is_zero());
        assert!(!v.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn cyclotomic_pivot() {
        let f = CycloField::new(3).unwrap();
        let a = Cyclo::a_pow(&f, 1);
        let mut e = Echelon::new(&f);
        let r1: SparseRow = [(0, a.clone()), (1, Cyclo::one(&f))].into_iter().collect();
        let r2: SparseRow = [(0, a.mul(&a)), (1, a.clone())].into_iter().collect();
        assert!(e.insert(r1));
        assert!(!e.insert(r2));
    }
}
