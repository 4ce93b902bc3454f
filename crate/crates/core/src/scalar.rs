use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field elements the generic evaluators run over.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync {
    fn from_int(v: i64) -> Self;
}

impl<T> Scalar for T
where
    T: Clone + Debug + PartialEq + Num + Neg<Output = T> + FromPrimitive + Send + Sync,
{
    fn from_int(v: i64) -> Self {
        T::from_i64(v).expect("every scalar type represents small integers")
    }
}

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Reads "±n" or "±p/q".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::parse(0, format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::parse(0, format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// `p/q`, or just `n` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Integer power with a signed exponent (negative exponents invert).
pub fn pow_signed(base: &Rational, e: i64) -> Result<Rational> {
    if e >= 0 {
        Ok(num_traits::pow(base.clone(), e as usize))
    } else if base.is_zero() {
        Err(Error::ZeroBase)
    } else {
        Ok(num_traits::pow(base.recip(), e.unsigned_abs() as usize))
    }
}

pub fn pow_u(base: &Rational, e: u64) -> Rational {
    num_traits::pow(base.clone(), e as usize)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn to_u64(r: &Rational) -> Option<u64> {
    if is_integer(r) && !r.is_negative() {
        r.numer().to_u64()
    } else {
        None
    }
}

/// Positive integer n with n·r integral for every r in `xs`.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()))
}
