//! Quaternion algebras `(a, b / K)` over an imaginary quadratic field
//! `K = Q(sqrt(-d))`: arithmetic, the Macfarlane involution, rational Hilbert
//! symbols and the matrix embedding.

mod hilbert;
mod macfarlane;
mod matrix;

pub use hilbert::{hilbert_symbol_rational, ramification_set_rational, Place};
pub use macfarlane::{extend_to_k, is_macfarlane, FieldSpec, MacfarlaneVerdict, Normalization};
pub use matrix::{dagger_trace, from_matrix, to_matrix, Mat2};

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::QuatError;
use crate::exactnum::{int, is_squarefree, QuadNum, Rat};

/// Descriptor of the algebra `(a, b / Q(sqrt(-d)))`: `i^2 = a`, `j^2 = b`, `ij = -ji`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraDesc {
    d: i64,
    a: Rat,
    b: Rat,
}

impl AlgebraDesc {
    pub fn new(d: i64, a: Rat, b: Rat) -> Result<Self, QuatError> {
        if d <= 0 || !is_squarefree(d) {
            return Err(QuatError::BadFieldParameter(d));
        }
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroConstant);
        }
        Ok(Self { d, a, b })
    }

    /// The split algebra `(1, 1 / Q(sqrt(-d)))`, i.e. 2x2 matrices over `K`.
    pub fn split(d: i64) -> Result<Self, QuatError> {
        Self::new(d, Rat::one(), Rat::one())
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    /// Radicand of `K`, namely `-d`.
    pub fn m(&self) -> i64 {
        -self.d
    }

    /// Positive structure constants, as required by the involution.
    pub fn is_normalized(&self) -> bool {
        self.a.is_positive() && self.b.is_positive()
    }

    /// Diagonal of the norm form on the Macfarlane space in the basis
    /// `1, i, j, sqrt(-d) ij`: `(1, -a, -b, -abd)`.
    pub fn gram_diagonal(&self) -> [Rat; 4] {
        [
            Rat::one(),
            -&self.a,
            -&self.b,
            -(&self.a * &self.b * int(self.d)),
        ]
    }

    pub(crate) fn ab(&self) -> Rat {
        &self.a * &self.b
    }

    pub(crate) fn abd(&self) -> Rat {
        &self.a * &self.b * int(self.d)
    }
}

/// Quaternion `w + x i + y j + z ij` with coordinates in `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quat {
    pub w: QuadNum,
    pub x: QuadNum,
    pub y: QuadNum,
    pub z: QuadNum,
    desc: AlgebraDesc,
}

/// Total order on quaternions used for deterministic maps and sets.
pub type QuatKey = [Rat; 8];

impl Quat {
    pub fn new(
        w: QuadNum,
        x: QuadNum,
        y: QuadNum,
        z: QuadNum,
        desc: &AlgebraDesc,
    ) -> Result<Self, QuatError> {
        let m = desc.m();
        for c in [&w, &x, &y, &z] {
            if c.radicand() != m {
                return Err(QuatError::Num(crate::error::NumError::RadicandMismatch(
                    m,
                    c.radicand(),
                )));
            }
        }
        Ok(Self {
            w,
            x,
            y,
            z,
            desc: desc.clone(),
        })
    }

    /// Quaternion with rational coordinates.
    pub fn from_rats(w: Rat, x: Rat, y: Rat, z: Rat, desc: &AlgebraDesc) -> Self {
        let m = desc.m();
        let c = |r: Rat| QuadNum::raw(r, Rat::zero(), m);
        Self {
            w: c(w),
            x: c(x),
            y: c(y),
            z: c(z),
            desc: desc.clone(),
        }
    }

    pub fn scalar(c: QuadNum, desc: &AlgebraDesc) -> Self {
        let m = desc.m();
        Self {
            w: c,
            x: QuadNum::zero(m),
            y: QuadNum::zero(m),
            z: QuadNum::zero(m),
            desc: desc.clone(),
        }
    }

    pub fn one(desc: &AlgebraDesc) -> Self {
        Self::scalar(QuadNum::one(desc.m()), desc)
    }

    pub fn zero(desc: &AlgebraDesc) -> Self {
        Self::scalar(QuadNum::zero(desc.m()), desc)
    }

    /// The basis element `i`, `j` or `ij` (index 1, 2, 3); index 0 is `1`.
    pub fn basis(index: usize, desc: &AlgebraDesc) -> Self {
        let m = desc.m();
        let mut coords = [
            QuadNum::zero(m),
            QuadNum::zero(m),
            QuadNum::zero(m),
            QuadNum::zero(m),
        ];
        coords[index] = QuadNum::one(m);
        let [w, x, y, z] = coords;
        Self {
            w,
            x,
            y,
            z,
            desc: desc.clone(),
        }
    }

    pub fn desc(&self) -> &AlgebraDesc {
        &self.desc
    }

    pub fn coords(&self) -> [&QuadNum; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    pub fn key(&self) -> QuatKey {
        let [w, x, y, z] = self.coords();
        [
            w.re().clone(),
            w.im().clone(),
            x.re().clone(),
            x.im().clone(),
            y.re().clone(),
            y.im().clone(),
            z.re().clone(),
            z.im().clone(),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    fn check_desc(&self, other: &Self) -> Result<(), QuatError> {
        if self.desc == other.desc {
            Ok(())
        } else {
            Err(QuatError::DescriptorMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, QuatError> {
        self.check_desc(other)?;
        Ok(Self {
            w: &self.w + &other.w,
            x: &self.x + &other.x,
            y: &self.y + &other.y,
            z: &self.z + &other.z,
            desc: self.desc.clone(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, QuatError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, QuatError> {
        self.check_desc(other)?;
        let (a, b) = (&self.desc.a, &self.desc.b);
        let ab = self.desc.ab();
        let (w1, x1, y1, z1) = (&self.w, &self.x, &self.y, &self.z);
        let (w2, x2, y2, z2) = (&other.w, &other.x, &other.y, &other.z);
        let w =
            &(&(w1 * w2) + &(x1 * x2).scale(a)) + &(&(y1 * y2).scale(b) - &(z1 * z2).scale(&ab));
        let x = &(&(w1 * x2) + &(x1 * w2)) + &(&(z1 * y2) - &(y1 * z2)).scale(b);
        let y = &(&(w1 * y2) + &(y1 * w2)) + &(&(x1 * z2) - &(z1 * x2)).scale(a);
        let z = &(&(w1 * z2) + &(z1 * w2)) + &(&(x1 * y2) - &(y1 * x2));
        Ok(Self {
            w,
            x,
            y,
            z,
            desc: self.desc.clone(),
        })
    }

    pub fn scale(&self, c: &QuadNum) -> Self {
        Self {
            w: &self.w * c,
            x: &self.x * c,
            y: &self.y * c,
            z: &self.z * c,
            desc: self.desc.clone(),
        }
    }

    /// Quaternion conjugate `w - xi - yj - zij`.
    pub fn conj(&self) -> Self {
        Self {
            w: self.w.clone(),
            x: -&self.x,
            y: -&self.y,
            z: -&self.z,
            desc: self.desc.clone(),
        }
    }

    /// Reduced norm `w^2 - a x^2 - b y^2 + ab z^2`.
    pub fn norm(&self) -> QuadNum {
        let ab = self.desc.ab();
        &(&(&self.w * &self.w) - &(&self.x * &self.x).scale(&self.desc.a))
            + &(&(&self.z * &self.z).scale(&ab) - &(&self.y * &self.y).scale(&self.desc.b))
    }

    /// Reduced trace `2w`.
    pub fn trace(&self) -> QuadNum {
        self.w.scale(&int(2))
    }

    /// Coordinate-wise complex conjugation (the nontrivial automorphism of `K`).
    pub fn galois_conj(&self) -> Self {
        Self {
            w: self.w.conj(),
            x: self.x.conj(),
            y: self.y.conj(),
            z: self.z.conj(),
            desc: self.desc.clone(),
        }
    }

    /// The involution of the second kind `w + xi + yj + zij -> w' + x'i + y'j - z'ij`
    /// (primes denoting complex conjugates). Its fixed set is the Macfarlane space.
    pub fn dagger(&self) -> Result<Self, QuatError> {
        if !self.desc.is_normalized() {
            return Err(QuatError::NotNormalized);
        }
        Ok(Self {
            w: self.w.conj(),
            x: self.x.conj(),
            y: self.y.conj(),
            z: -self.z.conj(),
            desc: self.desc.clone(),
        })
    }

    /// Membership in `Sym(B, dagger) = F + Fi + Fj + sqrt(-d) F ij`, tested on
    /// coordinates: `w, x, y` rational and `z` purely imaginary.
    pub fn is_symmetric(&self) -> bool {
        self.w.is_rational()
            && self.x.is_rational()
            && self.y.is_rational()
            && self.z.re().is_zero()
    }

    pub fn inverse(&self) -> Result<Self, QuatError> {
        let n = self.norm();
        let inv = n.checked_inv()?;
        Ok(self.conj().scale(&inv))
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) + ({})i + ({})j + ({})ij",
            self.w, self.x, self.y, self.z
        )
    }
}

impl Add<&Quat> for &Quat {
    type Output = Quat;
    fn add(self, rhs: &Quat) -> Quat {
        self.checked_add(rhs)
            .expect("quaternions from the same algebra")
    }
}

impl Sub<&Quat> for &Quat {
    type Output = Quat;
    fn sub(self, rhs: &Quat) -> Quat {
        self.checked_sub(rhs)
            .expect("quaternions from the same algebra")
    }
}

impl Mul<&Quat> for &Quat {
    type Output = Quat;
    fn mul(self, rhs: &Quat) -> Quat {
        self.checked_mul(rhs)
            .expect("quaternions from the same algebra")
    }
}

impl Neg for &Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat {
            w: -&self.w,
            x: -&self.x,
            y: -&self.y,
            z: -&self.z,
            desc: self.desc.clone(),
        }
    }
}

/// A norm-one quaternion up to sign, i.e. an element of `PB^1`, stored with a
/// canonical sign: the first nonzero coordinate (in the order `w, x, y, z`)
/// has positive rational part, or zero rational part and positive
/// `sqrt(-d)`-part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElem {
    q: Quat,
}

impl GroupElem {
    pub fn new(q: Quat) -> Result<Self, QuatError> {
        if !q.norm().is_one() {
            return Err(QuatError::NotUnit);
        }
        Ok(Self::canonical(q))
    }

    pub fn identity(desc: &AlgebraDesc) -> Self {
        Self { q: Quat::one(desc) }
    }

    fn canonical(q: Quat) -> Self {
        let leading = q.coords().into_iter().find(|c| !c.is_zero()).cloned();
        let negative = match leading {
            Some(c) => c.re().is_negative() || (c.re().is_zero() && c.im().is_negative()),
            None => false,
        };
        Self {
            q: if negative { -&q } else { q },
        }
    }

    pub fn quat(&self) -> &Quat {
        &self.q
    }

    pub fn into_quat(self) -> Quat {
        self.q
    }

    pub fn compose(&self, other: &Self) -> Result<Self, QuatError> {
        Ok(Self::canonical(self.q.checked_mul(&other.q)?))
    }

    /// Inverse, which for norm one is the quaternion conjugate.
    pub fn inverse(&self) -> Self {
        Self::canonical(self.q.conj())
    }

    pub fn is_identity(&self) -> bool {
        self.q == Quat::one(self.q.desc())
    }

    pub fn key(&self) -> QuatKey {
        self.q.key()
    }
}
