use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::exactalg::{Cyclo, CycloField};

/// Square matrix over a cyclotomic field, stored as sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    field: Arc<CycloField>,
    rows: Vec<BTreeMap<usize, Cyclo>>,
}

impl CMatrix {
    pub fn zero(field: &Arc<CycloField>, n: usize) -> Self {
        CMatrix { field: field.clone(), rows: alloc::vec![BTreeMap::new(); n] }
    }

    pub fn scalar(field: &Arc<CycloField>, n: usize, c: &Cyclo) -> Self {
        let mut m = CMatrix::zero(field, n);
        if !c.is_zero() {
            for (i, row) in m.rows.iter_mut().enumerate() {
                row.insert(i, c.clone());
            }
        }
        m
    }

    pub fn identity(field: &Arc<CycloField>, n: usize) -> Self {
        CMatrix::scalar(field, n, &Cyclo::one(field))
    }

    pub fn diagonal(field: &Arc<CycloField>, d: Vec<Cyclo>) -> Self {
        let mut m = CMatrix::zero(field, d.len());
        for (i, c) in d.into_iter().enumerate() {
            m.set(i, i, c);
        }
        m
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BTreeMap<usize, Cyclo>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Cyclo {
        self.rows[i].get(&j).cloned().unwrap_or_else(|| Cyclo::zero(&self.field))
    }

    pub fn set(&mut self, i: usize, j: usize, c: Cyclo) {
        if c.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, c);
        }
    }

    /// `self[i][j] += c`.
    pub fn add_at(&mut self, i: usize, j: usize, c: &Cyclo) {
        if c.is_zero() {
            return;
        }
        let v = match self.rows[i].get(&j) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        self.set(i, j, v);
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), other.dim(), "matrix size mismatch");
        let mut out = self.clone();
        for (i, row) in other.rows.iter().enumerate() {
            for (&j, c) in row {
                out.add_at(i, j, c);
            }
        }
        out
    }

    pub fn neg(&self) -> CMatrix {
        self.scale(&Cyclo::from_int(&self.field, -1))
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Cyclo) -> CMatrix {
        if c.is_zero() {
            return CMatrix::zero(&self.field, self.dim());
        }
        let rows = self.rows.iter().map(|r| r.iter().map(|(&j, v)| (j, v.mul(c))).collect()).collect();
        CMatrix { field: self.field.clone(), rows }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), other.dim(), "matrix size mismatch");
        let mut out = CMatrix::zero(&self.field, self.dim());
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, Cyclo> = BTreeMap::new();
            for (&k, a) in row {
                for (&j, b) in &other.rows[k] {
                    let t = a.mul(b);
                    match acc.get_mut(&j) {
                        Some(v) => *v = v.add(&t),
                        None => {
                            acc.insert(j, t);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.rows[i] = acc;
        }
        out
    }

    pub fn pow(&self, k: u32) -> CMatrix {
        let mut result = CMatrix::identity(&self.field, self.dim());
        for _ in 0..k {
            result = result.mul(self);
        }
        result
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.keys().all(|&j| j == i))
    }

    pub fn diagonal_entries(&self) -> Vec<Cyclo> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    /// The scalar `c` when the matrix equals `c * Id`.
    pub fn as_scalar(&self) -> Option<Cyclo> {
        if !self.is_diagonal() {
            return None;
        }
        let c = self.get(0, 0);
        (1..self.dim()).all(|i| self.get(i, i) == c).then_some(c)
    }
}
