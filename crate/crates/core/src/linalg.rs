//! Sparse exact linear algebra: echelon bases, ranks, kernels and
//! cohomology representatives.

use std::collections::BTreeMap;

use crate::field::Field;

/// Sparse vector, sorted by index, no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Row-echelon basis of a subspace. Each pivot row has leading entry 1.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pivots: BTreeMap<usize, SparseVec<F::Elem>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon {
            pivots: BTreeMap::new(),
        }
    }
}

fn axpy<F: Field>(f: &F, acc: &mut BTreeMap<usize, F::Elem>, c: &F::Elem, row: &[(usize, F::Elem)]) {
    for (j, r) in row {
        let t = f.mul(c, r);
        match acc.get_mut(j) {
            Some(x) => {
                *x = f.sub(x, &t);
                if f.is_zero(x) {
                    acc.remove(j);
                }
            }
            None => {
                acc.insert(*j, f.neg(&t));
            }
        }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn reduce(&self, f: &F, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let mut acc: BTreeMap<usize, F::Elem> = v.iter().cloned().collect();
        let mut cursor = 0;
        while let Some((&k, c)) = acc.range(cursor..).next() {
            cursor = k + 1;
            if let Some(row) = self.pivots.get(&k) {
                let c = c.clone();
                axpy(f, &mut acc, &c, row);
            }
        }
        acc.into_iter().collect()
    }

    pub fn contains(&self, f: &F, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(f, v).is_empty()
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, f: &F, v: &[(usize, F::Elem)]) -> bool {
        let r = self.reduce(f, v);
        match r.first() {
            None => false,
            Some((lead, c)) => {
                let lead = *lead;
                let ci = f.inv(c).expect("nonzero leading entry");
                let row = r.iter().map(|(j, x)| (*j, f.mul(x, &ci))).collect();
                self.pivots.insert(lead, row);
                true
            }
        }
    }
}

/// Rank of the span of `cols`.
pub fn rank<F: Field>(f: &F, cols: &[SparseVec<F::Elem>]) -> usize {
    let mut e = Echelon::new();
    for c in cols {
        e.insert(f, c);
    }
    e.rank()
}

/// Basis of the kernel of the map sending basis vector `j` to `cols[j]`.
/// One kernel vector per column that depends on earlier ones.
pub fn kernel<F: Field>(f: &F, cols: &[SparseVec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    // pivot column -> (normalized image row, matching combination of inputs)
    let mut pivots: BTreeMap<usize, (SparseVec<F::Elem>, SparseVec<F::Elem>)> = BTreeMap::new();
    let mut out = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut img: BTreeMap<usize, F::Elem> = col.iter().cloned().collect();
        let mut comb: BTreeMap<usize, F::Elem> = BTreeMap::new();
        comb.insert(j, f.one());
        let mut cursor = 0;
        while let Some((&k, c)) = img.range(cursor..).next() {
            cursor = k + 1;
            if let Some((row, rc)) = pivots.get(&k) {
                let c = c.clone();
                axpy(f, &mut img, &c, row);
                axpy(f, &mut comb, &c, rc);
            }
        }
        match img.iter().next() {
            None => out.push(comb.into_iter().collect()),
            Some((&lead, c)) => {
                let ci = f.inv(c).expect("nonzero leading entry");
                let row = img.iter().map(|(i, x)| (*i, f.mul(x, &ci))).collect();
                let rc = comb.iter().map(|(i, x)| (*i, f.mul(x, &ci))).collect();
                pivots.insert(lead, (row, rc));
            }
        }
    }
    out
}

/// Cocycles lifting a basis of `ker / span(boundaries)`, chosen greedily in
/// the canonical order of `kernel`.
pub fn cohomology_reps<F: Field>(
    f: &F,
    cocycles: &[SparseVec<F::Elem>],
    boundaries: &[SparseVec<F::Elem>],
) -> Vec<SparseVec<F::Elem>> {
    let mut e = Echelon::new();
    for b in boundaries {
        e.insert(f, b);
    }
    cocycles
        .iter()
        .filter(|z| e.insert(f, z))
        .cloned()
        .collect()
}

/// Apply a sparse linear map (given by its columns) to a sparse vector.
pub fn apply<F: Field>(f: &F, cols: &[SparseVec<F::Elem>], v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (j, c) in v {
        for (i, x) in &cols[*j] {
            let t = f.mul(c, x);
            let e = acc.entry(*i).or_insert_with(|| f.zero());
            *e = f.add(e, &t);
        }
    }
    acc.into_iter().filter(|(_, x)| !f.is_zero(x)).collect()
}

/// Whether a dense square matrix is invertible.
pub fn dense_invertible<F: Field>(f: &F, mut m: Vec<Vec<F::Elem>>) -> bool {
    let n = m.len();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !f.is_zero(&m[r][col])) else {
            return false;
        };
        m.swap(col, p);
        let inv = f.inv(&m[col][col]).expect("nonzero pivot");
        for r in col + 1..n {
            if f.is_zero(&m[r][col]) {
                continue;
            }
            let c = f.mul(&m[r][col], &inv);
            for k in col..n {
                let t = f.mul(&c, &m[col][k]);
                m[r][k] = f.sub(&m[r][k], &t);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn v(f: &PrimeField, xs: &[(usize, i64)]) -> SparseVec<u64> {
        xs.iter().map(|(i, x)| (*i, f.from_i64(*x))).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let f = PrimeField::default();
        let cols = vec![
            v(&f, &[(0, 1), (1, 2)]),
            v(&f, &[(0, 2), (1, 4)]),
            v(&f, &[(2, 1)]),
            v(&f, &[(0, 1), (1, 2), (2, 1)]),
        ];
        assert_eq!(rank(&f, &cols), 2);
        let ker = kernel(&f, &cols);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(apply(&f, &cols, k).is_empty());
        }
    }

    #[test]
    fn cohomology_of_short_complex() {
        let f = Rationals;
        let one = f.one();
        // cocycles e0, e1, e2; boundary e0+e1
        let z: Vec<_> = (0..3).map(|i| vec![(i, one.clone())]).collect();
        let b = vec![vec![(0, one.clone()), (1, one.clone())]];
        let reps = cohomology_reps(&f, &z, &b);
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], vec![(0, one.clone())]);
        assert_eq!(reps[1], vec![(2, one)]);
    }

    #[test]
    fn dense_det() {
        let f = PrimeField::default();
        assert!(dense_invertible(&f, vec![vec![0, 1], vec![1, 0]]));
        assert!(!dense_invertible(&f, vec![vec![1, 2], vec![2, 4]]));
        assert!(dense_invertible(&f, vec![]));
    }
}
