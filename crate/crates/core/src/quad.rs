//! Exact arithmetic in the field Q(√5).
//!
//! Every coordinate in the crate is a [`QuadNum`]: a pair of arbitrary
//! precision rationals `(a, b)` standing for `a + b·√5`. Since √5 is
//! irrational the pair is unique, so derived equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadNum {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadNum { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        QuadNum::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `n/d + 0·√5`. Panics if `d == 0`; use [`QuadNum::from_str`] for
    /// untrusted input.
    pub fn ratio(n: i64, d: i64) -> Self {
        QuadNum::new(rat(n, d), BigRational::zero())
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadNum::new(a, BigRational::zero())
    }

    pub fn zero() -> Self {
        QuadNum::default()
    }

    pub fn one() -> Self {
        QuadNum::from_int(1)
    }

    pub fn sqrt5() -> Self {
        QuadNum::new(BigRational::zero(), BigRational::one())
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of √5.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    /// Galois conjugate `a - b·√5`.
    pub fn conjugate(&self) -> Self {
        QuadNum::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² - 5b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - rat(5, 1) * &self.b * &self.b
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with 5b²
        let lhs = &self.a * &self.a;
        let rhs = rat(5, 1) * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(QuadNum::from_rational(self.a.recip()));
        }
        let n = self.norm();
        Ok(QuadNum::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &QuadNum) -> Result<Self> {
        Ok(self * &rhs.checked_inv()?)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * 5f64.sqrt()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadNum::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b.is_zero() && other.b.is_zero() {
            return self.a.cmp(&other.a);
        }
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &'a QuadNum) -> QuadNum {
        QuadNum::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &'a QuadNum) -> QuadNum {
        QuadNum::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &'a QuadNum) -> QuadNum {
        if self.b.is_zero() && rhs.b.is_zero() {
            return QuadNum::from_rational(&self.a * &rhs.a);
        }
        let five = rat(5, 1);
        QuadNum::new(
            &self.a * &rhs.a + five * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(-self.a.clone(), -self.b.clone())
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(-self.a, -self.b)
    }
}

/// Panics on division by zero, like the integer operators.
impl<'a> Div<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn div(self, rhs: &'a QuadNum) -> QuadNum {
        self.checked_div(rhs).expect("QuadNum division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &'a QuadNum) -> QuadNum {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QuadNum> for &'a QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&QuadNum> for QuadNum {
    fn add_assign(&mut self, rhs: &QuadNum) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&QuadNum> for QuadNum {
    fn sub_assign(&mut self, rhs: &QuadNum) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl Sum for QuadNum {
    fn sum<I: Iterator<Item = QuadNum>>(iter: I) -> QuadNum {
        iter.fold(QuadNum::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        QuadNum::from_int(n)
    }
}

impl From<BigRational> for QuadNum {
    fn from(r: BigRational) -> Self {
        QuadNum::from_rational(r)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `a+b√5` with both parts in lowest terms, e.g. `-1/2+0√5`, `3/5-1/5√5`.
impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{}√5",
            fmt_rational(&self.a),
            sign,
            fmt_rational(&self.b.abs())
        )
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational> {
    let bad = || Error::Parse(whole.to_string());
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for QuadNum {
    type Err = Error;

    /// Accepts `a`, `a±b√5`, `b√5` with `a`, `b` integers or `n/d` fractions.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Parse(s.to_string()));
        }
        let Some(body) = t.strip_suffix("√5") else {
            return Ok(QuadNum::from_rational(parse_rational(t, s)?));
        };
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) => (parse_rational(&body[..i], s)?, &body[i..]),
            None => (BigRational::zero(), body),
        };
        let b = match b {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other, s)?,
        };
        Ok(QuadNum::new(a, b))
    }
}

impl serde::Serialize for QuadNum {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for QuadNum {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: (i64, i64), b: (i64, i64)) -> QuadNum {
        QuadNum::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn sqrt5_squared() {
        let s = QuadNum::sqrt5();
        assert_eq!(&s * &s, QuadNum::from_int(5));
    }

    #[test]
    fn additive_identity() {
        assert_eq!(QuadNum::from_int(2) + QuadNum::zero(), QuadNum::from_int(2));
    }

    #[test]
    fn inverse_of_sqrt5() {
        let inv = QuadNum::sqrt5().checked_inv().unwrap();
        assert_eq!(inv, q((0, 1), (1, 5)));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(QuadNum::zero().checked_inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 2 - √5 < 0, 3 - √5 > 0, -11/5 + √5 > 0, -9/4 + √5 < 0
        assert_eq!(q((2, 1), (-1, 1)).signum(), -1);
        assert_eq!(q((3, 1), (-1, 1)).signum(), 1);
        assert_eq!(q((-11, 5), (1, 1)).signum(), 1);
        assert_eq!(q((-9, 4), (1, 1)).signum(), -1);
        assert_eq!(q((-5, 2), (1, 1)).signum(), -1);
    }

    #[test]
    fn parse_and_print() {
        for s in ["-1/2+0√5", "3/5-1/5√5", "0+1√5", "7+0√5"] {
            let x: QuadNum = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!("√5".parse::<QuadNum>().unwrap(), QuadNum::sqrt5());
        assert_eq!("-√5".parse::<QuadNum>().unwrap(), -QuadNum::sqrt5());
        assert_eq!("2/4".parse::<QuadNum>().unwrap(), QuadNum::ratio(1, 2));
        assert_eq!("1-2√5".parse::<QuadNum>().unwrap(), q((1, 1), (-2, 1)));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("1/0".parse::<QuadNum>().is_err());
        assert!("1/2+1/0√5".parse::<QuadNum>().is_err());
        assert!("".parse::<QuadNum>().is_err());
        assert!("x".parse::<QuadNum>().is_err());
    }

    fn arb() -> impl Strategy<Value = QuadNum> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(|(a, b, c, d)| QuadNum::new(rat(a, b), rat(c, d)))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb(), y in arb(), z in arb()) {
            prop_assert_eq!((&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!((&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &x * &y + &x * &z);
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.checked_inv().unwrap(), QuadNum::one());
            }
        }

        #[test]
        fn order_matches_floats(x in arb(), y in arb()) {
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x < y, fx < fy);
            }
        }

        #[test]
        fn string_round_trip(x in arb()) {
            prop_assert_eq!(x.to_string().parse::<QuadNum>().unwrap(), x);
        }
    }
}
