//! Matrix realisations of the four |1|-graded families.
//!
//! Basis order within each graded piece follows the lexicographic order of
//! the elementary-matrix position that labels each element (quaternionic
//! entries are further ordered by unit `1, i, j, k`).

use crate::linalg::Mat;
use crate::models::quaternion;
use crate::rational::Rational;

pub(crate) struct RawBases {
    pub ambient: usize,
    pub neg1: Vec<Mat>,
    pub zero: Vec<Mat>,
    pub one: Vec<Mat>,
    /// Diagonal sign matrix `S` with `Z -> S Z^T S` mapping g_1 onto g_-1.
    pub signature: Mat,
    /// Invariant bilinear form (conformal only).
    pub form: Option<Mat>,
    /// Right multiplications by i, j, k (quaternionic only).
    pub complex_structures: Vec<Mat>,
}

fn e(n: usize, r: usize, c: usize) -> Mat {
    Mat::unit(n, n, r, c)
}

/// `sl(m+1)` with g_-1 the first column below the corner.
pub(crate) fn projective(m: usize) -> RawBases {
    let n = m + 1;
    let neg1 = (1..n).map(|i| e(n, i, 0)).collect();
    let one = (1..n).map(|j| e(n, 0, j)).collect();
    let mut zero = Vec::new();
    for i in 1..n {
        for j in 1..n {
            let mut b = e(n, i, j);
            if i == j {
                b = &b - &e(n, 0, 0);
            }
            zero.push(b);
        }
    }
    RawBases {
        ambient: n,
        neg1,
        zero,
        one,
        signature: Mat::identity(n),
        form: None,
        complex_structures: Vec::new(),
    }
}

/// `sl(p+q)` with g_-1 the lower-left `q x p` block.
pub(crate) fn grassmannian(p: usize, q: usize) -> RawBases {
    let n = p + q;
    let mut neg1 = Vec::new();
    for r in 0..q {
        for c in 0..p {
            neg1.push(e(n, p + r, c));
        }
    }
    let mut one = Vec::new();
    for r in 0..p {
        for c in 0..q {
            one.push(e(n, r, p + c));
        }
    }
    let in_block = |i: usize, j: usize| (i < p) == (j < p);
    let mut zero = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !in_block(i, j) || (i == j && i == n - 1) {
                continue;
            }
            let mut b = e(n, i, j);
            if i == j {
                b = &b - &e(n, n - 1, n - 1);
            }
            zero.push(b);
        }
    }
    RawBases {
        ambient: n,
        neg1,
        zero,
        one,
        signature: Mat::identity(n),
        form: None,
        complex_structures: Vec::new(),
    }
}

/// `o(p+1, q+1)` preserving the form `[[0,0,1],[0,J,0],[1,0,0]]`,
/// `J = diag(1^p, (-1)^q)`.
pub(crate) fn conformal(p: usize, q: usize) -> RawBases {
    let n = p + q;
    let size = n + 2;
    let j = |i: usize| -> i64 {
        if i < p {
            1
        } else {
            -1
        }
    };
    let mut form = Mat::zeros(size, size);
    form[(0, size - 1)] = Rational::one();
    form[(size - 1, 0)] = Rational::one();
    for i in 0..n {
        form[(1 + i, 1 + i)] = Rational::from_int(j(i));
    }
    let neg1 = (0..n)
        .map(|i| {
            let mut x = e(size, 1 + i, 0);
            x[(size - 1, 1 + i)] = Rational::from_int(-j(i));
            x
        })
        .collect();
    let one = (0..n)
        .map(|i| {
            let mut z = e(size, 0, 1 + i);
            z[(1 + i, size - 1)] = Rational::from_int(-j(i));
            z
        })
        .collect();
    let mut zero = vec![&e(size, 0, 0) - &e(size, size - 1, size - 1)];
    for a in 0..n {
        for b in a + 1..n {
            let mut x = e(size, 1 + a, 1 + b);
            x[(1 + b, 1 + a)] = Rational::from_int(-j(a) * j(b));
            zero.push(x);
        }
    }
    let mut sig = Mat::identity(size);
    for i in 0..n {
        sig[(1 + i, 1 + i)] = Rational::from_int(j(i));
    }
    RawBases {
        ambient: size,
        neg1,
        zero,
        one,
        signature: sig,
        form: Some(form),
        complex_structures: Vec::new(),
    }
}

/// `sl(m+1, H)` inside `gl(4(m+1), R)`, quaternions acting by left
/// multiplication on each entry.
pub(crate) fn quaternionic(m: usize) -> RawBases {
    let n = m + 1;
    let size = 4 * n;
    let units: Vec<Mat> = (0..4).map(quaternion::left).collect();
    let block = |r: usize, c: usize, u: usize| quaternion::place(n, r, c, &units[u]);
    let mut neg1 = Vec::new();
    for r in 1..n {
        for u in 0..4 {
            neg1.push(block(r, 0, u));
        }
    }
    let mut one = Vec::new();
    for c in 1..n {
        for u in 0..4 {
            one.push(block(0, c, u));
        }
    }
    let mut zero = Vec::new();
    let positions = std::iter::once((0, 0)).chain((1..n).flat_map(|r| (1..n).map(move |c| (r, c))));
    for (r, c) in positions {
        for u in 0..4 {
            if u == 0 && r == c {
                if r == 0 {
                    continue;
                }
                zero.push(&block(r, r, 0) - &block(0, 0, 0));
            } else {
                zero.push(block(r, c, u));
            }
        }
    }
    RawBases {
        ambient: size,
        neg1,
        zero,
        one,
        signature: Mat::identity(size),
        form: None,
        complex_structures: quaternion::complex_structures(n),
    }
}
