//! Real 4x4 realisation of the quaternions, basis order `1, i, j, k`.

use crate::linalg::Mat;
use crate::rational::Rational;

/// Product of two basis units as `(sign, unit)`.
pub fn unit_product(a: usize, b: usize) -> (i64, usize) {
    const TABLE: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    TABLE[a][b]
}

/// Matrix of `x -> u x` for the basis unit `u`.
pub fn left(u: usize) -> Mat {
    let mut m = Mat::zeros(4, 4);
    for b in 0..4 {
        let (s, c) = unit_product(u, b);
        m[(c, b)] = Rational::from_int(s);
    }
    m
}

/// Matrix of `x -> x u` for the basis unit `u`.
pub fn right(u: usize) -> Mat {
    let mut m = Mat::zeros(4, 4);
    for b in 0..4 {
        let (s, c) = unit_product(b, u);
        m[(c, b)] = Rational::from_int(s);
    }
    m
}

/// Places a 4x4 block at quaternionic position `(r, c)` of an `n x n`
/// quaternionic matrix.
pub fn place(n: usize, r: usize, c: usize, block: &Mat) -> Mat {
    let mut m = Mat::zeros(4 * n, 4 * n);
    for i in 0..4 {
        for j in 0..4 {
            m[(4 * r + i, 4 * c + j)] = block[(i, j)].clone();
        }
    }
    m
}

/// Right multiplication by `i`, `j`, `k` on `H^n`; quaternion-linear maps are
/// exactly the real matrices commuting with these.
pub fn complex_structures(n: usize) -> Vec<Mat> {
    (1..4)
        .map(|u| {
            let r = right(u);
            let mut m = Mat::zeros(4 * n, 4 * n);
            for k in 0..n {
                m = &m + &place(n, k, k, &r);
            }
            m
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_is_a_representation() {
        for a in 0..4 {
            for b in 0..4 {
                let (s, c) = unit_product(a, b);
                assert_eq!(&left(a) * &left(b), left(c).scale(&Rational::from_int(s)));
            }
        }
    }

    #[test]
    fn left_and_right_commute() {
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(&left(a) * &right(b), &right(b) * &left(a));
            }
        }
    }

    #[test]
    fn transpose_is_conjugation() {
        assert_eq!(left(0).transpose(), left(0));
        for u in 1..4 {
            assert_eq!(left(u).transpose(), -&left(u));
        }
    }
}
