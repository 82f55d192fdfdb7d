//! Exact arithmetic in Q, in quadratic fields Q(sqrt(m)), and in
//! multiquadratic radical extensions of those fields.

mod integer;
mod quad;
mod surd;

pub use integer::{factor_u64, is_prime_u64, is_squarefree, prime_factors, squarefree_part};
pub use quad::{quad_arith, quad_compare, ArithOp, QuadNum};
pub use surd::Surd;

use alloc::string::{String, ToString};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::NumError;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q`, `-p/q` (surrounding whitespace allowed).
pub fn parse_rat(text: &str) -> Result<Rat, NumError> {
    let t = text.trim();
    let bad = || NumError::Parse(t.to_string());
    let t = t.strip_prefix('+').unwrap_or(t);
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) || den.starts_with('-') {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(NumError::DivisionByZero);
    }
    Ok(Rat::new(n, d))
}

pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| {
        num_integer::Integer::lcm(&acc, v.denom())
    })
}
