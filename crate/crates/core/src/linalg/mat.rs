use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::rational::Rational;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn scalar(n: usize, s: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Matrix with a single entry `1` at `(r, c)`.
    pub fn unit(rows: usize, cols: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(r, c)] = Rational::one();
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square());
        (0..self.rows).map(|i| &self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Mat) -> Mat {
        &(self * rhs) - &(rhs * self)
    }

    /// Stacks `self` over `below`.
    pub fn vstack(&self, below: &Mat) -> Mat {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Mat::from_vec(self.rows + below.rows, self.cols, data)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let mut m = Mat::zeros(rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref_with_pivots(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                if !m[(row, c)].is_zero() {
                    m[(row, c)] = &m[(row, c)] * &inv;
                }
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let delta = &f * &m[(row, c)];
                    m[(r, c)] -= delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det *= &piv;
            let inv = piv.recip();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] * &inv;
                for c in col..n {
                    if m[(col, c)].is_zero() {
                        continue;
                    }
                    let delta = &f * &m[(col, c)];
                    m[(r, c)] -= delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rational::one();
        }
        let (red, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(red.submatrix(0..n, n..2 * n))
    }

    pub fn pow(&self, e: u32) -> Mat {
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Row-major flattening.
    pub fn vectorize(&self) -> Vec<Rational> {
        self.data.clone()
    }
}

/// Reduced row echelon form and rank.
pub fn rref(m: &Mat) -> (Mat, usize) {
    let (r, p) = m.rref_with_pivots();
    (r, p.len())
}

/// Basis of the right null space `{v : m v = 0}`, one vector per free column,
/// normalised so that the free coordinate is `1`.
pub fn kernel_basis(m: &Mat) -> Vec<Vec<Rational>> {
    let (red, pivots) = m.rref_with_pivots();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -&red[(i, free)];
        }
        basis.push(v);
    }
    basis
}

/// Solves `m x = b`; returns one particular solution if consistent.
pub fn solve(m: &Mat, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(m.rows, b.len());
    let mut aug = Mat::zeros(m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug[(r, c)] = m[(r, c)].clone();
        }
        aug[(r, m.cols)] = b[r].clone();
    }
    let (red, pivots) = aug.rref_with_pivots();
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = red[(i, m.cols)].clone();
    }
    Some(x)
}

impl Index<(usize, usize)> for Mat {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| format!("{v:>5}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Serialised as an array of rows of `"p/q"` strings.
impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}
