//! Exact integers and rationals, plus the divisor-sum machinery every
//! invariant formula is built from.
//!
//! `Int` and `Rat` are the `num` big-number types. Small indices (degrees,
//! multiplicities, Hermite triples) are carried as `u64`; every value that
//! ends up in a coefficient is promoted to `Rat` before arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Sum of the positive divisors of `x` when `x` is a positive integer, zero
/// for every other rational.
///
/// Formulas evaluate `sigma(d/m)` freely; this total extension is what makes
/// the `m ∤ d` terms vanish.
pub fn sigma(x: &Rat) -> Int {
    if !x.is_integer() || !x.is_positive() {
        return Int::zero();
    }
    match x.numer().to_u64() {
        Some(d) => Int::from(sigma_u64(d)),
        None => sigma_big(x.numer()),
    }
}

/// `sigma(d)` for a machine-size degree; `sigma_u64(0) == 0`.
pub fn sigma_u64(d: u64) -> u64 {
    if d == 0 {
        return 0;
    }
    let mut total = 0;
    let mut k = 1;
    while k * k <= d {
        if d.is_multiple_of(k) {
            total += k;
            if k * k != d {
                total += d / k;
            }
        }
        k += 1;
    }
    total
}

/// `sigma(num/den)` without building a rational: zero unless `den | num`.
pub fn sigma_ratio(num: u64, den: u64) -> u64 {
    if den == 0 || !num.is_multiple_of(den) {
        0
    } else {
        sigma_u64(num / den)
    }
}

/// Ascending positive divisors of `d`.
pub fn divisors(d: u64) -> Result<Vec<u64>> {
    if d == 0 {
        return Err(Error::OutOfRange {
            what: "d",
            value: "0".into(),
            expected: ">= 1",
        });
    }
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut k = 1;
    while k * k <= d {
        if d.is_multiple_of(k) {
            low.push(k);
            if k * k != d {
                high.push(d / k);
            }
        }
        k += 1;
    }
    low.extend(high.into_iter().rev());
    Ok(low)
}

/// `σ(n)` from the factorization `n = Π p^e`: `Π (p^{e+1} − 1)/(p − 1)`.
fn sigma_big(n: &Int) -> Int {
    let mut rest = n.clone();
    let mut total = Int::one();
    let mut p = Int::from(2u8);
    while &p * &p <= rest {
        if (&rest % &p).is_zero() {
            let mut power = Int::one();
            while (&rest % &p).is_zero() {
                rest /= &p;
                power *= &p;
            }
            total *= (power * &p - 1u8) / (&p - 1u8);
        }
        p += 1u8;
    }
    if !rest.is_one() {
        total *= rest + 1u8;
    }
    total
}

/// Positive gcd; `(0, 0)` has no gcd and is rejected.
pub fn gcd(a: i64, b: i64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(Error::OutOfRange {
            what: "gcd arguments",
            value: "(0, 0)".into(),
            expected: "not both zero",
        });
    }
    Ok(a.unsigned_abs().gcd(&b.unsigned_abs()))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// `"p/q"` in lowest terms, `"p"` when the denominator is one.
pub fn format_rat(x: &Rat) -> String {
    // Ratio's Display already omits a unit denominator.
    x.to_string()
}

/// Parses `"p/q"` or `"p"`; the result is reduced.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::ParseRat(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: Int = num.parse().map_err(|_| bad())?;
    let den: Int = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Exact `floor(x)` for a non-negative rational, as `u64`; `None` on overflow.
pub fn floor_u64(x: &Rat) -> Option<u64> {
    if x.is_negative() {
        return None;
    }
    x.floor().to_integer().to_u64()
}

pub mod serde_rat {
    //! Serde adapter that writes a `Rat` in the `"p/q"` string form.
    use super::{format_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}
