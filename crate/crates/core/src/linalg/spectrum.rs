//! Characteristic polynomials and rational eigenvalues.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::linalg::{Mat, SparseMat};
use crate::rational::{common_denominator, Rational};

/// Trial-division bound used when enumerating divisors of the constant term.
const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumResult {
    /// Rational roots of the characteristic polynomial, ascending, repeated
    /// according to algebraic multiplicity.
    pub roots: Vec<Rational>,
    pub fully_split: bool,
    /// Diagonalizable over the rationals: fully split and every eigenspace
    /// has dimension equal to the multiplicity.
    pub diagonalizable: bool,
}

impl SpectrumResult {
    /// Distinct roots in ascending order.
    pub fn distinct(&self) -> Vec<Rational> {
        let mut d = self.roots.clone();
        d.dedup();
        d
    }
}

/// Characteristic polynomial `det(xI - m)` of an integer matrix by the
/// division-free Berkowitz recurrence. Coefficients are in descending degree
/// order; the leading coefficient is `1`.
pub fn charpoly_integer(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut poly = vec![BigInt::one()];
    for r in 0..n {
        // First column of the Toeplitz factor: 1, -a_rr, -R S, -R A S, ...
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(BigInt::one());
        toeplitz.push(-m[r][r].clone());
        let mut s: Vec<BigInt> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let rs: BigInt = (0..r).map(|j| &m[r][j] * &s[j]).sum();
            toeplitz.push(-rs);
            s = (0..r)
                .map(|i| (0..r).map(|j| &m[i][j] * &s[j]).sum())
                .collect();
        }
        let next: Vec<BigInt> = (0..r + 2)
            .map(|i| (0..=i.min(r)).map(|j| &toeplitz[i - j] * &poly[j]).sum())
            .collect();
        poly = next;
    }
    poly
}

/// Characteristic polynomial of a rational matrix, descending coefficients.
pub fn charpoly(m: &Mat) -> Vec<Rational> {
    assert!(
        m.is_square(),
        "characteristic polynomial of a non-square matrix"
    );
    let (scale, ints) = clear_denominators(m);
    let p = charpoly_integer(&ints);
    // det(xI - M) = scale^-n det((scale x) I - scale M)
    let s = Rational::from(scale);
    let mut out = Vec::with_capacity(p.len());
    let mut factor = Rational::one();
    for c in p {
        out.push(Rational::from(c) * &factor.recip());
        factor *= &s;
    }
    out
}

fn clear_denominators(m: &Mat) -> (BigInt, Vec<Vec<BigInt>>) {
    let scale = common_denominator(m.entries());
    let ints = (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|v| v.numer() * (&scale / v.denom()))
                .collect()
        })
        .collect();
    (scale, ints)
}

fn horner(poly: &[BigInt], x: &BigInt) -> BigInt {
    poly.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Divides by `(x - root)`; assumes `root` is a root.
fn deflate(poly: &[BigInt], root: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(poly.len() - 1);
    let mut acc = BigInt::zero();
    for c in &poly[..poly.len() - 1] {
        acc = acc * root + c;
        out.push(acc.clone());
    }
    out
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut rest = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p: u64 = 2;
    while p <= TRIAL_DIVISION_LIMIT && BigInt::from(p) * BigInt::from(p) <= rest {
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            factors.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        // Either prime, or a product of primes beyond the trial bound; in the
        // latter case only its full value is tried as a factor.
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (f, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut power = d.clone();
            next.push(power.clone());
            for _ in 0..e {
                power *= &f;
                next.push(power.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Integer roots with multiplicity of a monic integer polynomial.
fn integer_roots(mut poly: Vec<BigInt>) -> Vec<BigInt> {
    let mut roots = Vec::new();
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
        roots.push(BigInt::zero());
    }
    if poly.len() == 1 {
        return roots;
    }
    let constant = poly.last().cloned().unwrap_or_default();
    for d in positive_divisors(&constant) {
        for cand in [d.clone(), -d] {
            while poly.len() > 1 && horner(&poly, &cand).is_zero() {
                poly = deflate(&poly, &cand);
                roots.push(cand.clone());
            }
        }
    }
    roots
}

/// Rational eigenvalues with algebraic multiplicity, plus split and
/// diagonalizability flags. Irrational or complex roots are never
/// approximated; they only clear `fully_split`.
pub fn rational_spectrum(m: &Mat) -> SpectrumResult {
    assert!(m.is_square(), "spectrum of a non-square matrix");
    let n = m.rows();
    let (scale, ints) = clear_denominators(m);
    let poly = charpoly_integer(&ints);
    let s = Rational::from(scale);
    let mut roots: Vec<Rational> = integer_roots(poly)
        .into_iter()
        .map(|r| Rational::from(r) / &s)
        .collect();
    roots.sort();
    let fully_split = roots.len() == n;
    let mut diagonalizable = fully_split;
    if fully_split {
        let mut distinct = roots.clone();
        distinct.dedup();
        for r in &distinct {
            let mult = roots.iter().filter(|x| *x == r).count();
            let shifted = m - &Mat::scalar(n, r);
            if SparseMat::from_dense(&shifted).nullity() != mult {
                diagonalizable = false;
                break;
            }
        }
    }
    SpectrumResult {
        roots,
        fully_split,
        diagonalizable,
    }
}

/// Evaluates a descending-coefficient polynomial.
pub fn eval_poly(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter().fold(Rational::zero(), |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn diagonal_spectrum() {
        let s = rational_spectrum(&Mat::diag(&[q(1), q(2), q(2)]));
        assert_eq!(s.roots, vec![q(1), q(2), q(2)]);
        assert!(s.fully_split && s.diagonalizable);
    }

    #[test]
    fn jordan_block_not_diagonalizable() {
        let s = rational_spectrum(&Mat::from_ints(&[&[0, 1], &[0, 0]]));
        assert_eq!(s.roots, vec![q(0), q(0)]);
        assert!(s.fully_split);
        assert!(!s.diagonalizable);
    }

    #[test]
    fn rotation_has_no_rational_roots() {
        let s = rational_spectrum(&Mat::from_ints(&[&[0, -1], &[1, 0]]));
        assert!(s.roots.is_empty());
        assert!(!s.fully_split);
        assert!(!s.diagonalizable);
    }

    #[test]
    fn fractional_eigenvalues() {
        let m = Mat::from_rows(vec![
            vec![Rational::new(1, 2), Rational::one()],
            vec![Rational::zero(), Rational::new(-2, 3)],
        ]);
        let s = rational_spectrum(&m);
        assert_eq!(s.roots, vec![Rational::new(-2, 3), Rational::new(1, 2)]);
        assert!(s.diagonalizable);
    }

    #[test]
    fn partially_split() {
        // x^2 - 2 block plus eigenvalue 3
        let m = Mat::from_ints(&[&[0, 2, 0], &[1, 0, 0], &[0, 0, 3]]);
        let s = rational_spectrum(&m);
        assert_eq!(s.roots, vec![q(3)]);
        assert!(!s.fully_split);
    }

    #[test]
    fn charpoly_matches_cofactor_expansion() {
        // det(xI - M) for a 3x3 by hand: M = [[2,1,0],[0,1,-1],[1,0,3]]
        // = x^3 - 6x^2 + 11x - 5
        let m = Mat::from_ints(&[&[2, 1, 0], &[0, 1, -1], &[1, 0, 3]]);
        assert_eq!(charpoly(&m), vec![q(1), q(-6), q(11), q(-5)]);
    }

    proptest! {
        #[test]
        fn diagonal_matrices_return_their_diagonal(
            d in proptest::collection::vec((-20i64..20, 1i64..6), 1..7)
        ) {
            let diag: Vec<Rational> = d.iter().map(|&(n, k)| Rational::new(n, k)).collect();
            let s = rational_spectrum(&Mat::diag(&diag));
            let mut sorted = diag.clone();
            sorted.sort();
            prop_assert_eq!(s.roots, sorted);
            prop_assert!(s.fully_split && s.diagonalizable);
        }

        #[test]
        fn charpoly_vanishes_at_eigenvalues_of_triangular(
            d in proptest::collection::vec(-5i64..5, 1..6), seed in any::<u64>()
        ) {
            let n = d.len();
            let mut m = Mat::diag(&d.iter().map(|&v| q(v)).collect::<Vec<_>>());
            let mut x = seed;
            for r in 0..n {
                for c in r + 1..n {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    m[(r, c)] = q(((x >> 33) % 7) as i64 - 3);
                }
            }
            let p = charpoly(&m);
            for v in &d {
                prop_assert!(eval_poly(&p, &q(*v)).is_zero());
            }
            prop_assert_eq!(rational_spectrum(&m).roots.len(), n);
        }
    }
}
