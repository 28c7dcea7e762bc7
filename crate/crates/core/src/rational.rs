//! Exact rational scalars.
//!
//! Values that fit in a pair of `i64` stay on a fast machine-integer path;
//! anything larger is promoted to an arbitrary-precision [`BigRational`] and
//! demoted again as soon as it fits. The representation is canonical, so
//! structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    // Invariant: den > 0, gcd(|num|, den) = 1, num != i64::MIN.
    Small(i64, i64),
    // Invariant: does not fit the small representation.
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn fits_small(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        if n == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(n)));
        }
        Rational(Repr::Small(n, 1))
    }

    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    fn from_i128(mut n: i128, mut d: i128) -> Self {
        if d < 0 {
            // |d| <= 2^126 in every caller, so negation is safe.
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Self::zero();
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        let (n, d) = (n / g, d / g);
        if fits_small(n) && fits_small(d) {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            ))))
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational::new already reduces; new_raw callers must reduce themselves.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(Box::new(r)))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                Self::from_i128(*d as i128, *n as i128)
            }
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact `n`-th root if it exists in the rationals (real root; odd `n`
    /// admits negative radicands). Even roots return the nonnegative root.
    pub fn nth_root_exact(&self, n: u32) -> Option<Self> {
        assert!(n >= 1);
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.is_negative() && n.is_multiple_of(2) {
            return None;
        }
        let neg = self.is_negative();
        let a = self.abs();
        let (num, den) = (a.numer(), a.denom());
        let rn = num.nth_root(n);
        let rd = den.nth_root(n);
        if num_traits::pow(rn.clone(), n as usize) != num
            || num_traits::pow(rd.clone(), n as usize) != den
        {
            return None;
        }
        let r = Self::from_bigints(rn, rd);
        Some(if neg { -r } else { r })
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self * &Rational::from_int(k)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Self::from_int(n as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

fn add_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            if *b == 1 && *d == 1 {
                return Rational::from_i128(*a as i128 + *c as i128, 1);
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            Rational::from_i128(a * d + c * b, b * d)
        }
        _ => Rational::from_big(x.to_big() + y.to_big()),
    }
}

fn mul_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            Rational::from_i128(a * c, b * d)
        }
        _ => Rational::from_big(x.to_big() * y.to_big()),
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                $f(self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                $f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, |x: &Rational, y: &Rational| add_ref(x, &-y));
binop!(Mul, mul, mul_ref);
binop!(Div, div, |x: &Rational, y: &Rational| mul_ref(
    x,
    &y.recip()
));

macro_rules! assignop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Rational> for Rational {
            fn $m(&mut self, rhs: &Rational) {
                *self = &*self $op rhs;
            }
        }
        impl $tr<Rational> for Rational {
            fn $m(&mut self, rhs: Rational) {
                *self = &*self $op &rhs;
            }
        }
    };
}

assignop!(AddAssign, add_assign, +);
assignop!(SubAssign, sub_assign, -);
assignop!(MulAssign, mul_assign, *);
assignop!(DivAssign, div_assign, /);

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let num: BigInt = n.parse().map_err(|_| err())?;
        let den: BigInt = match d {
            Some(d) => d.parse().map_err(|_| err())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(err());
        }
        Ok(Rational::from_bigints(num, den))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Least common multiple of the denominators, as a big integer.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(r(2, 4), r(1, 2));
        assert_eq!(r(3, -6), r(-1, 2));
        assert_eq!(r(0, -5), Rational::zero());
        assert_eq!(r(0, 7).to_string(), "0");
        assert_eq!(r(-6, 4).to_string(), "-3/2");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.numer(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let m = Rational::from_int(i64::MIN);
        assert_eq!(-(-m.clone()), m);
        assert_eq!(
            (&m + &Rational::one()).to_string(),
            (i64::MIN + 1).to_string()
        );
    }

    #[test]
    fn parse_and_display() {
        for s in ["0", "7", "-3/4", "123456789012345678901234567890/11"] {
            let v: Rational = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap(), r(2, 3));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn roots() {
        assert_eq!(r(9, 4).nth_root_exact(2), Some(r(3, 2)));
        assert_eq!(r(-8, 27).nth_root_exact(3), Some(r(-2, 3)));
        assert_eq!(r(2, 1).nth_root_exact(2), None);
        assert_eq!(r(-1, 1).nth_root_exact(2), None);
    }

    fn big_or_small() -> impl Strategy<Value = Rational> {
        prop_oneof![
            (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| Rational::new(n, d)),
            (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d)),
        ]
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational(a in big_or_small(), b in big_or_small()) {
            let (ba, bb) = (a.to_big(), b.to_big());
            prop_assert_eq!((&a + &b).to_big(), &ba + &bb);
            prop_assert_eq!((&a - &b).to_big(), &ba - &bb);
            prop_assert_eq!((&a * &b).to_big(), &ba * &bb);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), &ba / &bb);
            }
            prop_assert_eq!(a.cmp(&b), ba.cmp(&bb));
        }
    }
}
