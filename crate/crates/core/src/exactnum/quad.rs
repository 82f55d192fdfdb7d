use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use alloc::string::ToString;
use num_traits::{One, Signed, Zero};

use super::{int, integer::is_squarefree, parse_rat, Rat};
use crate::error::NumError;

/// Exact element `re + im * sqrt(m)` of the quadratic field Q(sqrt(m)).
///
/// The embedding is fixed: for `m < 0`, `sqrt(m) = i * sqrt(|m|)`, so
/// [`QuadNum::conj`] is complex conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    re: Rat,
    im: Rat,
    m: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn check_radicand(m: i64) -> Result<(), NumError> {
    if m == 0 || m == 1 || !is_squarefree(m) {
        Err(NumError::BadRadicand(m))
    } else {
        Ok(())
    }
}

impl QuadNum {
    pub fn new(re: Rat, im: Rat, m: i64) -> Result<Self, NumError> {
        check_radicand(m)?;
        Ok(Self { re, im, m })
    }

    pub fn from_rat(re: Rat, m: i64) -> Result<Self, NumError> {
        Self::new(re, Rat::zero(), m)
    }

    /// Constructor for callers that already hold a validated radicand.
    pub(crate) fn raw(re: Rat, im: Rat, m: i64) -> Self {
        debug_assert!(check_radicand(m).is_ok());
        Self { re, im, m }
    }

    pub fn zero(m: i64) -> Self {
        Self::raw(Rat::zero(), Rat::zero(), m)
    }

    pub fn one(m: i64) -> Self {
        Self::raw(Rat::one(), Rat::zero(), m)
    }

    pub fn from_int(n: i64, m: i64) -> Self {
        Self::raw(int(n), Rat::zero(), m)
    }

    /// The generator `sqrt(m)` itself.
    pub fn sqrt_m(m: i64) -> Self {
        Self::raw(Rat::zero(), Rat::one(), m)
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }

    pub fn im(&self) -> &Rat {
        &self.im
    }

    pub fn radicand(&self) -> i64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True when the value is rational.
    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// True when the value lies in R under the fixed embedding.
    pub fn is_real(&self) -> bool {
        self.m > 0 || self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::raw(self.re.clone(), -&self.im, self.m)
    }

    /// Field norm `x * conj(x) = re^2 - m im^2`.
    pub fn norm(&self) -> Rat {
        &self.re * &self.re - int(self.m) * &self.im * &self.im
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::raw(&self.re * r, &self.im * r, self.m)
    }

    fn same_field(&self, other: &Self) -> Result<(), NumError> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(NumError::RadicandMismatch(self.m, other.m))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumError> {
        self.same_field(other)?;
        Ok(Self::raw(
            &self.re + &other.re,
            &self.im + &other.im,
            self.m,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumError> {
        self.same_field(other)?;
        Ok(Self::raw(
            &self.re - &other.re,
            &self.im - &other.im,
            self.m,
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumError> {
        self.same_field(other)?;
        let re = &self.re * &other.re + int(self.m) * &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        Ok(Self::raw(re, im, self.m))
    }

    pub fn checked_inv(&self) -> Result<Self, NumError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(Self::raw(&self.re / &n, -&self.im / &n, self.m))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumError> {
        self.same_field(other)?;
        self.checked_mul(&other.checked_inv()?)
    }

    /// Sign of a real value, decided exactly.
    pub fn signum(&self) -> Result<Ordering, NumError> {
        if self.im.is_zero() {
            return Ok(self.re.cmp(&Rat::zero()));
        }
        if self.m < 0 {
            return Err(NumError::NotReal);
        }
        let sr = self.re.cmp(&Rat::zero());
        let si = self.im.cmp(&Rat::zero());
        if sr == Ordering::Equal || sr == si {
            return Ok(si);
        }
        // opposite signs: compare re^2 against m im^2
        let d = (&self.re * &self.re).cmp(&(int(self.m) * &self.im * &self.im));
        Ok(if sr == Ordering::Greater {
            d
        } else {
            d.reverse()
        })
    }

    /// Parses `p/q`, `p/q+r/s*sqrt(m)`, `r/s*sqrt(m)` or `sqrt(m)`.
    ///
    /// `m` fixes the field for text that has no radical term; if the text
    /// names a radicand it must agree with `m`.
    pub fn parse(text: &str, m: Option<i64>) -> Result<Self, NumError> {
        let s: alloc::string::String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || NumError::Parse(text.to_string());
        let Some(pos) = s.find("sqrt(") else {
            let m = m.ok_or_else(bad)?;
            return Self::from_rat(parse_rat(&s)?, m);
        };
        let tail = &s[pos + 5..];
        let radicand_text = tail.strip_suffix(')').ok_or_else(bad)?;
        let radicand: i64 = radicand_text.parse().map_err(|_| bad())?;
        if let Some(expected) = m {
            if expected != radicand {
                return Err(NumError::RadicandMismatch(expected, radicand));
            }
        }
        let head = s[..pos].strip_suffix('*').unwrap_or(&s[..pos]);
        let split = head
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (re_text, coef_text) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let re = parse_rat(re_text)?;
        let im = match coef_text {
            "" | "+" => Rat::one(),
            "-" => -Rat::one(),
            c => parse_rat(c)?,
        };
        Self::new(re, im, radicand)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            if self.im.is_positive() {
                f.write_str("+")?;
            }
        }
        write!(f, "{}*sqrt({})", self.im, self.m)
    }
}

/// Field arithmetic with explicit operation tag.
pub fn quad_arith(x: &QuadNum, y: &QuadNum, op: ArithOp) -> Result<QuadNum, NumError> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

/// Exact order of two real values of the same field.
pub fn quad_compare(x: &QuadNum, y: &QuadNum) -> Result<Ordering, NumError> {
    if !x.is_real() || !y.is_real() {
        return Err(NumError::NotReal);
    }
    x.checked_sub(y)?.signum()
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                self.$checked(rhs).expect("quadratic field arithmetic")
            }
        }
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::raw(-&self.re, -&self.im, self.m)
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}
