//! Exact rationals.
//!
//! `Rat` is `num_rational::BigRational`: always reduced, positive
//! denominator, zero stored as `0/1`. Its `Display`/`FromStr` already use
//! the `"p/q"` / `"p"` text form, so this module only adds the small
//! constructors and integer helpers the rest of the crate leans on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"` (base 10, optional leading `-`).
pub fn parse(s: &str) -> Option<Rat> {
    s.trim().parse::<Rat>().ok()
}

/// The `"p/q"` / `"p"` serialization.
pub fn to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n!!` for odd `n`; `(-1)!! = 1`.
pub fn odd_double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn pow(r: &Rat, e: i64) -> Rat {
    num_traits::pow::Pow::pow(r, e as i32)
}

/// Positive gcd of the numerators and lcm of the denominators of a
/// collection of rationals, i.e. the rational content. Zero for an empty or
/// all-zero input.
pub fn content<'a, I: IntoIterator<Item = &'a Rat>>(values: I) -> Rat {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    let mut any = false;
    for v in values {
        if v.is_zero() {
            continue;
        }
        any = true;
        g = g.gcd(v.numer());
        l = l.lcm(v.denom());
    }
    if !any {
        return Rat::zero();
    }
    Rat::new(g.abs(), l)
}

pub fn to_i64(r: &Rat) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}
