use core::fmt;

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::QuatError;
use crate::exactnum::{is_prime_u64, prime_factors, Rat};

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// `n/d` and `n*d` differ by the square `d^2`.
fn square_class_integer(r: &Rat) -> BigInt {
    r.numer() * r.denom()
}

/// Splits `n = p^v * u` with `p` not dividing `u`.
fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut v = 0;
    let mut u = n.clone();
    while (&u % &p).is_zero() {
        u /= &p;
        v += 1;
    }
    (v, u)
}

fn legendre(u: &BigInt, p: u64) -> i32 {
    let p_big = BigInt::from(p);
    let r = u.mod_floor(&p_big);
    let e = BigInt::from((p - 1) / 2);
    if r.modpow(&e, &p_big) == BigInt::from(1) {
        1
    } else {
        -1
    }
}

/// `(u - 1) / 2 mod 2` for odd `u`.
fn eps(u: &BigInt) -> u32 {
    u.mod_floor(&BigInt::from(4)).to_u32().unwrap_or(0) / 2 % 2
}

/// `(u^2 - 1) / 8 mod 2` for odd `u`.
fn omega(u: &BigInt) -> u32 {
    match u.mod_floor(&BigInt::from(8)).to_u32().unwrap_or(0) {
        3 | 5 => 1,
        _ => 0,
    }
}

/// Hilbert symbol `(a, b)_v` for nonzero rationals: `-1` exactly when
/// `(a, b / Q_v)` is a division algebra.
pub fn hilbert_symbol_rational(a: &Rat, b: &Rat, place: Place) -> Result<i32, QuatError> {
    if a.is_zero() || b.is_zero() {
        return Err(QuatError::ZeroConstant);
    }
    let p = match place {
        Place::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            })
        }
        Place::Prime(p) if is_prime_u64(p) => p,
        Place::Prime(p) => return Err(QuatError::BadPlace(p)),
    };
    let (alpha, u) = split_valuation(&square_class_integer(a), p);
    let (beta, v) = split_valuation(&square_class_integer(b), p);
    if p == 2 {
        let exp = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        return Ok(if exp.is_multiple_of(2) { 1 } else { -1 });
    }
    let mut sign = if (alpha * beta) % 2 == 1 && (p - 1) / 2 % 2 == 1 {
        -1
    } else {
        1
    };
    if beta % 2 == 1 {
        sign *= legendre(&u, p);
    }
    if alpha % 2 == 1 {
        sign *= legendre(&v, p);
    }
    Ok(sign)
}

/// All places where `(a, b / Q)` ramifies, primes ascending then infinity.
/// Only 2 and the primes dividing the constants can ramify.
pub fn ramification_set_rational(a: &Rat, b: &Rat) -> Result<Vec<Place>, QuatError> {
    if a.is_zero() || b.is_zero() {
        return Err(QuatError::ZeroConstant);
    }
    let mut primes = alloc::vec![2u64];
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        primes.extend(prime_factors(n)?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places = Vec::new();
    for place in primes
        .into_iter()
        .map(Place::Prime)
        .chain([Place::Infinity])
    {
        if hilbert_symbol_rational(a, b, place)? == -1 {
            places.push(place);
        }
    }
    Ok(places)
}
