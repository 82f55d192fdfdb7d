use alloc::vec::Vec;
use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::NumError;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut stack = Vec::new();
    let mut rest = n;
    for p in 2u64..1000 {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
                primes.push(p);
            }
        }
    }
    if rest > 1 {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            primes.push(m);
        } else {
            let f = pollard_rho(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Distinct prime divisors of a nonzero big integer.
pub fn prime_factors(n: &BigInt) -> Result<Vec<u64>, NumError> {
    if n.is_zero() {
        return Ok(Vec::new());
    }
    let mut rest = n.magnitude().clone();
    let mut out = Vec::new();
    for p in 2u64..10_000 {
        let bp = num_bigint::BigUint::from(p);
        if (&rest % &bp).is_zero() {
            out.push(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
    }
    if rest > num_bigint::BigUint::from(1u8) {
        let small = rest.to_u64().ok_or(NumError::TooLarge)?;
        out.extend(factor_u64(small).into_iter().map(|(p, _)| p));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && factor_u64(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// Writes a nonzero integer as `f^2 * s` with `s` squarefree (sign kept on `s`).
pub fn squarefree_part(n: &BigInt) -> Result<(BigInt, i64), NumError> {
    if n.is_zero() {
        return Err(NumError::DivisionByZero);
    }
    let mag = n.magnitude().to_u64().ok_or(NumError::TooLarge)?;
    let mut square_root = 1u64;
    let mut core = 1u64;
    for (p, e) in factor_u64(mag) {
        square_root *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    let core = i64::try_from(core).map_err(|_| NumError::TooLarge)?;
    let signed = if n.sign() == Sign::Minus { -core } else { core };
    Ok((BigInt::from(square_root), signed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            small,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }

    #[test]
    fn factorization_multiplies_back() {
        for n in [1u64, 2, 12, 360, 1_000_000_007 * 998_244_353, 9_999_999_967] {
            let f = factor_u64(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
        }
    }

    #[test]
    fn squarefree_decomposition() {
        assert_eq!(
            squarefree_part(&BigInt::from(-72)).unwrap(),
            (BigInt::from(6), -2)
        );
        assert_eq!(
            squarefree_part(&BigInt::from(1)).unwrap(),
            (BigInt::from(1), 1)
        );
        assert!(is_squarefree(-3) && !is_squarefree(12) && !is_squarefree(0));
    }
}
