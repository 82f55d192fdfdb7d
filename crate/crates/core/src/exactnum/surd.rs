use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::integer::{factor_u64, squarefree_part};
use super::{parse_rat, QuadNum, Rat};
use crate::error::NumError;

/// Element of `K(sqrt(s1), sqrt(s2), ...)` written as `sum c_s * sqrt(s)` with
/// coefficients `c_s` in the quadratic field `K = Q(sqrt(m))` and distinct
/// squarefree positive integers `s` (`s = 1` is the constant term).
///
/// Square roots of distinct squarefree positive integers are linearly
/// independent over an imaginary quadratic field, so this form is canonical
/// and equality is structural. The real radicals are fixed by complex
/// conjugation, which acts on the coefficients only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    m: i64,
    terms: BTreeMap<u64, QuadNum>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `sqrt(s) * sqrt(t) = g * sqrt(st / g^2)` for squarefree `s`, `t`.
fn radical_product(s: u64, t: u64) -> (u64, u64) {
    let g = gcd(s, t);
    (g, (s / g) * (t / g))
}

impl Surd {
    pub fn zero(m: i64) -> Self {
        Self {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: i64) -> Self {
        Self::from_quad(QuadNum::one(m))
    }

    pub fn from_quad(q: QuadNum) -> Self {
        let m = q.radicand();
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { m, terms }
    }

    pub fn from_rat(r: Rat, m: i64) -> Self {
        Self::from_quad(QuadNum::raw(r, Rat::zero(), m))
    }

    /// `c * sqrt(s)` for squarefree `s >= 1`.
    pub fn monomial(c: QuadNum, s: u64) -> Self {
        let m = c.radicand();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(s, c);
        }
        Self { m, terms }
    }

    /// Positive square root of a nonnegative rational.
    pub fn sqrt_rat(r: &Rat, m: i64) -> Result<Self, NumError> {
        if r.is_negative() {
            return Err(NumError::NegativeSqrt);
        }
        if r.is_zero() {
            return Ok(Self::zero(m));
        }
        // sqrt(n/d) = sqrt(n d) / d
        let (f, s) = squarefree_part(&(r.numer() * r.denom()))?;
        let coef = Rat::new(f, r.denom().clone());
        Ok(Self::monomial(QuadNum::raw(coef, Rat::zero(), m), s as u64))
    }

    pub fn radicand(&self) -> i64 {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &QuadNum)> {
        self.terms.iter().map(|(&s, c)| (s, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as an element of `K`, if it has no radical part.
    pub fn as_quad(&self) -> Option<QuadNum> {
        match self.terms.len() {
            0 => Some(QuadNum::zero(self.m)),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<Rat> {
        self.as_quad()
            .filter(QuadNum::is_rational)
            .map(|q| q.re().clone())
    }

    /// True when every coefficient is real, i.e. the value is a real number.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(QuadNum::is_real)
    }

    fn insert_term(&mut self, s: u64, c: QuadNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&s) {
            Some(existing) => {
                *existing = &*existing + &c;
                if existing.is_zero() {
                    self.terms.remove(&s);
                }
            }
            None => {
                self.terms.insert(s, c);
            }
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), NumError> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(NumError::RadicandMismatch(self.m, other.m))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumError> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (&s, c) in &other.terms {
            out.insert_term(s, c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumError> {
        self.check_field(other)?;
        let mut out = Self::zero(self.m);
        for (&s, c) in &self.terms {
            for (&t, e) in &other.terms {
                let (g, st) = radical_product(s, t);
                out.insert_term(st, (c * e).scale(&Rat::from_integer(BigInt::from(g))));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QuadNum) -> Self {
        let mut out = Self::zero(self.m);
        for (&s, e) in &self.terms {
            out.insert_term(s, e * c);
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        let mut out = Self::zero(self.m);
        for (&s, e) in &self.terms {
            out.insert_term(s, e.scale(r));
        }
        out
    }

    /// Complex conjugation (acts on the `K` coefficients).
    pub fn conj(&self) -> Self {
        Self {
            m: self.m,
            terms: self.terms.iter().map(|(&s, c)| (s, c.conj())).collect(),
        }
    }

    /// `|x|^2 = x * conj(x)`.
    pub fn abs_sq(&self) -> Self {
        self * &self.conj()
    }

    fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self
            .terms
            .keys()
            .flat_map(|&s| factor_u64(s).into_iter().map(|(p, _)| p))
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// The automorphism `sqrt(p) -> -sqrt(p)` fixing the other radicals.
    fn flip_prime(&self, p: u64) -> Self {
        Self {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(&s, c)| (s, if s % p == 0 { -c } else { c.clone() }))
                .collect(),
        }
    }

    pub fn checked_inv(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        // multiply by Galois conjugates until the radicals are gone
        let mut numerator = Self::one(self.m);
        let mut rest = self.clone();
        for p in self.primes() {
            let flipped = rest.flip_prime(p);
            numerator = &numerator * &flipped;
            rest = &rest * &flipped;
        }
        let base = rest.as_quad().expect("radicals eliminated");
        Ok(numerator.scale(&base.checked_inv()?))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumError> {
        self.check_field(other)?;
        self.checked_mul(&other.checked_inv()?)
    }

    /// Exact sign of a real value.
    pub fn signum(&self) -> Result<Ordering, NumError> {
        if !self.is_real() {
            return Err(NumError::NotReal);
        }
        let folded = if self.m > 0 {
            self.split_complex().0
        } else {
            self.clone()
        };
        let real: BTreeMap<u64, Rat> = folded
            .terms
            .iter()
            .map(|(&s, c)| (s, c.re().clone()))
            .collect();
        Ok(real_sign(&real))
    }

    /// Splits a value into real and imaginary parts (as real radicals) using
    /// `sqrt(m) = i sqrt(|m|)` for `m < 0`.
    pub fn split_complex(&self) -> (Self, Self) {
        let mut re = Self::zero(self.m);
        let mut im = Self::zero(self.m);
        for (&s, c) in &self.terms {
            re.insert_term(s, QuadNum::raw(c.re().clone(), Rat::zero(), self.m));
            if self.m < 0 {
                let (g, key) = radical_product(s, self.m.unsigned_abs());
                let coef = c.im() * Rat::from_integer(BigInt::from(g));
                im.insert_term(key, QuadNum::raw(coef, Rat::zero(), self.m));
            } else {
                let (g, key) = radical_product(s, self.m as u64);
                let coef = c.im() * Rat::from_integer(BigInt::from(g));
                re.insert_term(key, QuadNum::raw(coef, Rat::zero(), self.m));
            }
        }
        (re, im)
    }

    /// Parses a real radical expression such as `3/5`, `-1/2*sqrt(2)` or
    /// `1+1/3*sqrt(6)`.
    pub fn parse_real(text: &str, m: i64) -> Result<Self, NumError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || NumError::Parse(text.to_string());
        if s.is_empty() {
            return Err(bad());
        }
        let mut starts: Vec<usize> = s
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-') && !s[..i].ends_with('('))
            .map(|(i, _)| i)
            .collect();
        starts.insert(0, 0);
        starts.push(s.len());
        let mut out = Self::zero(m);
        for w in starts.windows(2) {
            let term = &s[w[0]..w[1]];
            let (coef, radicand) = match term.find("sqrt(") {
                Some(pos) => {
                    let inner = term[pos + 5..].strip_suffix(')').ok_or_else(bad)?;
                    let r: u64 = inner.parse().map_err(|_| bad())?;
                    let head = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
                    let c = match head {
                        "" | "+" => Rat::one(),
                        "-" => -Rat::one(),
                        h => parse_rat(h)?,
                    };
                    (c, r)
                }
                None => (parse_rat(term)?, 1),
            };
            if radicand == 0 {
                continue;
            }
            let (f, core) = squarefree_part(&BigInt::from(radicand))?;
            let c = coef * Rat::from_integer(f);
            out.insert_term(core as u64, QuadNum::raw(c, Rat::zero(), m));
        }
        Ok(out)
    }
}

fn real_mul(x: &BTreeMap<u64, Rat>, y: &BTreeMap<u64, Rat>) -> BTreeMap<u64, Rat> {
    let mut out: BTreeMap<u64, Rat> = BTreeMap::new();
    for (&s, c) in x {
        for (&t, e) in y {
            let (g, st) = radical_product(s, t);
            let v = c * e * Rat::from_integer(BigInt::from(g));
            let entry = out.entry(st).or_insert_with(Rat::zero);
            *entry += v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Sign of `sum c_s sqrt(s)` by splitting off one prime radical at a time:
/// `A + B sqrt(p)` has the sign of `A` and `B` when they agree, and otherwise
/// the sign is decided by `A^2 - p B^2` in the smaller field.
fn real_sign(x: &BTreeMap<u64, Rat>) -> Ordering {
    let x: BTreeMap<u64, Rat> = x
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&s, c)| (s, c.clone()))
        .collect();
    match x.len() {
        0 => return Ordering::Equal,
        1 => return x.values().next().unwrap().cmp(&Rat::zero()),
        _ => {}
    }
    let p = x
        .keys()
        .filter(|&&s| s > 1)
        .flat_map(|&s| factor_u64(s).into_iter().map(|(p, _)| p))
        .max()
        .expect("at least one radical");
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    for (s, c) in x {
        if s % p == 0 {
            b.insert(s / p, c);
        } else {
            a.insert(s, c);
        }
    }
    let sa = real_sign(&a);
    let sb = real_sign(&b);
    if sb == Ordering::Equal || sa == sb {
        return sa;
    }
    if sa == Ordering::Equal {
        return sb;
    }
    let mut d = real_mul(&a, &a);
    let pbb = real_mul(&b, &b);
    for (s, c) in pbb {
        let entry = d.entry(s).or_insert_with(Rat::zero);
        *entry -= c * Rat::from_integer(BigInt::from(p));
    }
    let sd = real_sign(&d);
    if sa == Ordering::Greater {
        sd
    } else {
        sd.reverse()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&s, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let compound = !c.is_rational() && !c.re().is_zero();
            if k > 0 && !(c.is_rational() && c.re().is_negative()) {
                f.write_str("+")?;
            }
            match (s, compound) {
                (1, _) => f.write_str(&text)?,
                (_, true) => write!(f, "({text})*sqrt({s})")?,
                (_, false) => write!(f, "{text}*sqrt({s})")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Surd> for &Surd {
            type Output = Surd;
            fn $method(self, rhs: &Surd) -> Surd {
                let f: fn(&Surd, &Surd) -> Result<Surd, NumError> = $body;
                f(self, rhs).expect("radical field arithmetic")
            }
        }
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $method(self, rhs: Surd) -> Surd {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.checked_add(b));
forward_binop!(Sub, sub, |a, b| a.checked_add(&-b));
forward_binop!(Mul, mul, |a, b| a.checked_mul(b));

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            m: self.m,
            terms: self.terms.iter().map(|(&s, c)| (s, -c)).collect(),
        }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}
