//! Row-compressed sparse rational matrices.
//!
//! Codifferentials and cochain actions have a handful of nonzeros per column,
//! so ranks are computed by incremental sparse echelon insertion rather than
//! dense elimination.

use crate::linalg::{kernel_basis, Mat};
use crate::rational::Rational;

pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    // Each row sorted by column, no explicit zeros.
    data: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rational::one()));
        }
        m
    }

    /// Builds a matrix from its columns, each given as `(row, value)` pairs in
    /// any order; duplicate rows are summed.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        let cols = columns.len();
        let mut data: Vec<SparseVec> = vec![Vec::new(); rows];
        for (c, col) in columns.into_iter().enumerate() {
            for (r, v) in col {
                assert!(r < rows, "row index out of range");
                data[r].push((c, v));
            }
        }
        for row in &mut data {
            *row = normalize(std::mem::take(row));
        }
        SparseMat { rows, cols, data }
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Self {
        let data: Vec<SparseVec> = rows.into_iter().map(normalize).collect();
        for row in &data {
            assert!(
                row.iter().all(|(c, _)| *c < cols),
                "column index out of range"
            );
        }
        SparseMat {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_dense(m: &Mat) -> Self {
        let data = (0..m.rows())
            .map(|r| {
                m.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        SparseMat {
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.rows, self.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                m[(r, *c)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[r].binary_search_by_key(&c, |(k, _)| *k) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn transpose(&self) -> SparseMat {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        SparseMat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in sparse product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: SparseVec = Vec::new();
                for (k, a) in row {
                    for (c, b) in &rhs.data[*k] {
                        acc.push((*c, a * b));
                    }
                }
                normalize(acc)
            })
            .collect();
        SparseMat {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let one = Rational::one();
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| axpy(a, &-&one, b))
            .collect();
        SparseMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: &Rational) -> SparseMat {
        if s.is_zero() {
            return SparseMat::zeros(self.rows, self.cols);
        }
        SparseMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|(c, v)| (*c, v * s)).collect())
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| !v[*c].is_zero())
                    .map(|(c, a)| a * &v[*c])
                    .sum()
            })
            .collect()
    }

    /// Stacks matrices with equal column count vertically.
    pub fn vstack(blocks: &[&SparseMat]) -> SparseMat {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols));
        let data: Vec<SparseVec> = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        SparseMat {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Restriction to the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMat {
        let mut col_map = vec![usize::MAX; self.cols];
        for (new, &old) in cols.iter().enumerate() {
            col_map[old] = new;
        }
        let data = rows
            .iter()
            .map(|&r| {
                let mut row: SparseVec = self.data[r]
                    .iter()
                    .filter(|(c, _)| col_map[*c] != usize::MAX)
                    .map(|(c, v)| (col_map[*c], v.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect();
        SparseMat {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        if self.rows > self.cols {
            return self.transpose().rank();
        }
        let mut echelon = Echelon::new(self.cols);
        let mut order: Vec<&SparseVec> = self.data.iter().collect();
        order.sort_by_key(|r| r.len());
        for row in order {
            echelon.insert(row.clone());
        }
        echelon.rank()
    }

    /// Dimension of the right null space.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right null space, one vector per free column with that
    /// coordinate set to 1.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut echelon = Echelon::new(self.cols);
        let mut order: Vec<&SparseVec> = self.data.iter().collect();
        order.sort_by_key(|r| r.len());
        for row in order {
            echelon.insert(row.clone());
        }
        let reduced = SparseMat {
            rows: echelon.rows.len(),
            cols: self.cols,
            data: echelon.rows,
        };
        kernel_basis(&reduced.to_dense())
    }
}

/// Sorts by column, merges duplicates and drops zeros.
fn normalize(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(c, _)| *c);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (c, val) in v {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += val,
            _ => out.push((c, val)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// `a + s * b` for sorted sparse vectors.
pub fn axpy(a: &[(usize, Rational)], s: &Rational, b: &[(usize, Rational)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, s * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(s * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon basis keyed by leading column.
pub struct Echelon {
    pivot_of: Vec<Option<usize>>,
    rows: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            pivot_of: vec![None; cols],
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; if a nonzero remainder is left it is
    /// added. Returns whether the rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        loop {
            let Some((lead, coeff)) = v.first().cloned() else {
                return false;
            };
            match self.pivot_of[lead] {
                Some(p) => v = axpy(&v, &-coeff, &self.rows[p]),
                None => {
                    let inv = coeff.recip();
                    let v: SparseVec = v.into_iter().map(|(c, x)| (c, x * &inv)).collect();
                    self.pivot_of[lead] = Some(self.rows.len());
                    self.rows.push(v);
                    return true;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense() -> impl Strategy<Value = Mat> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(prop_oneof![3 => Just(0i64), 1 => -4i64..5], r * c).prop_map(
                move |v| Mat::from_vec(r, c, v.into_iter().map(Rational::from_int).collect()),
            )
        })
    }

    proptest! {
        #[test]
        fn rank_matches_dense(m in dense()) {
            let s = SparseMat::from_dense(&m);
            prop_assert_eq!(s.rank(), m.rank());
            prop_assert_eq!(s.to_dense(), m.clone());
        }

        #[test]
        fn product_matches_dense(a in dense(), b in dense()) {
            if a.cols() == b.rows() {
                let p = SparseMat::from_dense(&a).mul(&SparseMat::from_dense(&b));
                prop_assert_eq!(p.to_dense(), &a * &b);
            }
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = Mat::from_ints(&[&[1, 2, 0, -1], &[2, 4, 1, 0], &[3, 6, 1, -1]]);
        let s = SparseMat::from_dense(&m);
        let k = s.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(s.mul_vec(v).iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn from_columns_sums_duplicates() {
        let one = Rational::one;
        let m = SparseMat::from_columns(
            2,
            vec![vec![(0, one()), (0, one())], vec![(1, -one()), (1, one())]],
        );
        assert_eq!(m.get(0, 0), Rational::from_int(2));
        assert!(m.get(1, 1).is_zero());
        assert_eq!(m.nnz(), 1);
    }
}
