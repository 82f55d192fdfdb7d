//! The quaternion hyperboloid: norm-one, positive-trace points of the
//! Macfarlane space `M = Q + Qi + Qj + sqrt(-d) Q ij`, the action
//! `p -> g p g^dagger`, and the upper half-space and Klein pictures.

use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::HypError;
use crate::exactnum::{int, rat, QuadNum, Rat, Surd};
use crate::quatalg::{AlgebraDesc, GroupElem, Mat2, Quat};

/// Planar model (`z = 0`, Fuchsian groups) or the full 3-dimensional one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    /// Number of Klein coordinates.
    pub fn rank(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

/// A point `w + xi + yj + z' sqrt(-d) ij` on the hyperboloid
/// `w^2 - a x^2 - b y^2 - abd z'^2 = 1`, `w > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypPoint {
    desc: AlgebraDesc,
    dim: Dim,
    w: Rat,
    x: Rat,
    y: Rat,
    zp: Rat,
}

/// Lorentz form on `M` in the coordinates `(w, x, y, z')`.
fn lorentz(desc: &AlgebraDesc, p: [&Rat; 4], q: [&Rat; 4]) -> Rat {
    p[0] * q[0] - desc.a() * p[1] * q[1] - desc.b() * p[2] * q[2] - desc.abd() * p[3] * q[3]
}

impl HypPoint {
    pub fn new(
        desc: &AlgebraDesc,
        dim: Dim,
        w: Rat,
        x: Rat,
        y: Rat,
        zp: Rat,
    ) -> Result<Self, HypError> {
        if !desc.is_normalized() {
            return Err(crate::error::QuatError::NotNormalized.into());
        }
        if dim == Dim::Two && !zp.is_zero() {
            return Err(HypError::NotOnHyperboloid("planar points have z' = 0"));
        }
        if !w.is_positive() {
            return Err(HypError::NotOnHyperboloid("w must be positive"));
        }
        let p = Self {
            desc: desc.clone(),
            dim,
            w,
            x,
            y,
            zp,
        };
        if !p.form(&p).is_one() {
            return Err(HypError::NotOnHyperboloid("norm is not 1"));
        }
        Ok(p)
    }

    /// The centre `1`.
    pub fn origin(desc: &AlgebraDesc, dim: Dim) -> Self {
        Self {
            desc: desc.clone(),
            dim,
            w: Rat::one(),
            x: Rat::zero(),
            y: Rat::zero(),
            zp: Rat::zero(),
        }
    }

    /// Reads a quaternion fixed by the involution with norm 1 and positive trace.
    pub fn from_quat(q: &Quat, dim: Dim) -> Result<Self, HypError> {
        if !q.is_symmetric() {
            return Err(HypError::NotOnHyperboloid("not in the Macfarlane space"));
        }
        Self::new(
            q.desc(),
            dim,
            q.w.re().clone(),
            q.x.re().clone(),
            q.y.re().clone(),
            q.z.im().clone(),
        )
    }

    pub fn to_quat(&self) -> Quat {
        let m = self.desc.m();
        let r = |v: &Rat| QuadNum::from_rat(v.clone(), m).expect("valid radicand");
        let z = QuadNum::new(Rat::zero(), self.zp.clone(), m).expect("valid radicand");
        Quat::new(r(&self.w), r(&self.x), r(&self.y), z, &self.desc).expect("same radicand")
    }

    pub fn desc(&self) -> &AlgebraDesc {
        &self.desc
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn w(&self) -> &Rat {
        &self.w
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }

    pub fn zp(&self) -> &Rat {
        &self.zp
    }

    pub fn coords(&self) -> [&Rat; 4] {
        [&self.w, &self.x, &self.y, &self.zp]
    }

    pub fn is_origin(&self) -> bool {
        self.w.is_one()
    }

    /// `tr(p q*) / 2`.
    pub fn form(&self, other: &Self) -> Rat {
        lorentz(&self.desc, self.coords(), other.coords())
    }

    fn check_same_model(&self, other: &Self) -> Result<(), HypError> {
        if self.desc != other.desc || self.dim != other.dim {
            return Err(HypError::ModelMismatch);
        }
        Ok(())
    }
}

impl fmt::Display for HypPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_quat())
    }
}

/// The isometric action `p -> g p g^dagger`.
pub fn act(g: &GroupElem, p: &HypPoint) -> Result<HypPoint, HypError> {
    let q = g.quat();
    if q.desc() != p.desc() {
        return Err(HypError::ModelMismatch);
    }
    if p.dim == Dim::Two && !q.coords().iter().all(|c| c.is_rational()) {
        return Err(HypError::NotFuchsian);
    }
    let image = q.checked_mul(&p.to_quat())?.checked_mul(&q.dagger()?)?;
    HypPoint::from_quat(&image, p.dim)
}

/// `cosh` of the hyperbolic distance.
pub fn cosh_distance(p: &HypPoint, q: &HypPoint) -> Result<Rat, HypError> {
    p.check_same_model(q)?;
    Ok(p.form(q))
}

/// A point `u + vI + hJ` of upper half-space (`v = 0` in the planar model),
/// with coordinates exact real radicals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UhsPoint {
    pub u: Surd,
    pub v: Surd,
    pub h: Surd,
}

impl UhsPoint {
    pub fn new(u: Surd, v: Surd, h: Surd) -> Result<Self, HypError> {
        if !(u.is_real() && v.is_real()) {
            return Err(crate::error::NumError::NotReal.into());
        }
        if h.signum()? != Ordering::Greater {
            return Err(HypError::NonPositiveHeight);
        }
        Ok(Self { u, v, h })
    }
}

impl fmt::Display for UhsPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})I + ({})J", self.u, self.v, self.h)
    }
}

fn surd_rat(r: &Rat, m: i64) -> Surd {
    Surd::from_rat(r.clone(), m)
}

/// Map to upper half-space compatible with the matrix embedding: the image
/// of `p` is `g . J` for any `g` with `p = g g^dagger`.
pub fn to_uhs(p: &HypPoint) -> Result<UhsPoint, HypError> {
    let desc = &p.desc;
    let m = desc.m();
    let sa = Surd::sqrt_rat(desc.a(), m)?;
    let sb = Surd::sqrt_rat(desc.b(), m)?;
    let sabd = Surd::sqrt_rat(&desc.abd(), m)?;
    let denom = &surd_rat(&p.w, m) + &sa.scale_rat(&p.x);
    let inv = denom.checked_inv()?;
    let u = &sb.scale_rat(&p.y) * &inv;
    let v = &sabd.scale_rat(&-&p.zp) * &inv;
    UhsPoint::new(u, v, inv)
}

/// Inverse of [`to_uhs`]; the point must come from an exact point of `M`.
pub fn from_uhs(pt: &UhsPoint, desc: &AlgebraDesc, dim: Dim) -> Result<HypPoint, HypError> {
    let m = desc.m();
    if pt.h.radicand() != m {
        return Err(HypError::ModelMismatch);
    }
    if pt.h.signum()? != Ordering::Greater {
        return Err(HypError::NonPositiveHeight);
    }
    let sq = &(&(&pt.u * &pt.u) + &(&pt.v * &pt.v)) + &(&pt.h * &pt.h);
    let two_h = pt.h.scale_rat(&int(2));
    let one = Surd::one(m);
    let exact = |num: Surd, den: Surd| -> Result<Rat, HypError> {
        num.checked_div(&den)?.as_rat().ok_or(HypError::Inexact)
    };
    let w = exact(&sq + &one, two_h.clone())?;
    let x = exact(&one - &sq, &two_h * &Surd::sqrt_rat(desc.a(), m)?)?;
    let y = exact(pt.u.clone(), &pt.h * &Surd::sqrt_rat(desc.b(), m)?)?;
    let zp = exact(-&pt.v, &pt.h * &Surd::sqrt_rat(&desc.abd(), m)?)?;
    HypPoint::new(desc, dim, w, x, y, zp)
}

/// The imaginary unit `I` as a radical over `K = Q(sqrt(-d))`: `sqrt(-d) sqrt(d) / d`.
fn imaginary_unit(m: i64) -> Surd {
    let d = -m;
    let c = QuadNum::new(Rat::zero(), rat(1, d), m).expect("valid radicand");
    Surd::monomial(c, d as u64)
}

/// Möbius action of a matrix with determinant 1 on upper half-space, using
/// the quaternionic formula `(a zeta + b)(c zeta + d)^-1` with heights.
pub fn mobius(mat: &Mat2, pt: &UhsPoint) -> Result<UhsPoint, HypError> {
    let m = mat.radicand();
    if m >= 0 {
        return Err(HypError::ModelMismatch);
    }
    let zeta = &pt.u + &(&pt.v * &imaginary_unit(m));
    let [al, be, ga, de] = mat.entries();
    let h2 = &pt.h * &pt.h;
    let num_top = &(al * &zeta) + be;
    let num_bot = &(ga * &zeta) + de;
    let denom = &num_bot.abs_sq() + &(&ga.abs_sq() * &h2);
    let inv = denom.checked_inv()?;
    let top = &(&num_top * &num_bot.conj()) + &(&(al * &ga.conj()) * &h2);
    let (u, v) = (&top * &inv).split_complex();
    UhsPoint::new(u, v, &pt.h * &inv)
}

/// Central projection `(x, y, z') / w` into the ellipsoid
/// `a k1^2 + b k2^2 + abd k3^2 < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinPoint {
    pub k: [Rat; 3],
}

impl KleinPoint {
    /// `a k1^2 + b k2^2 + abd k3^2`.
    pub fn quadratic(&self, desc: &AlgebraDesc) -> Rat {
        let [k1, k2, k3] = &self.k;
        desc.a() * k1 * k1 + desc.b() * k2 * k2 + desc.abd() * k3 * k3
    }
}

pub fn to_klein(p: &HypPoint) -> KleinPoint {
    KleinPoint {
        k: [&p.x / &p.w, &p.y / &p.w, &p.zp / &p.w],
    }
}

/// Inverse of [`to_klein`]; exact only when `1 - Q(k)` is a rational square.
pub fn from_klein(k: &KleinPoint, desc: &AlgebraDesc, dim: Dim) -> Result<HypPoint, HypError> {
    let rest = Rat::one() - k.quadratic(desc);
    if !rest.is_positive() {
        return Err(HypError::OutsideEllipsoid);
    }
    let root = Surd::sqrt_rat(&rest, desc.m())?
        .as_rat()
        .ok_or(HypError::Inexact)?;
    let w = root.recip();
    let [k1, k2, k3] = &k.k;
    HypPoint::new(desc, dim, w.clone(), k1 * &w, k2 * &w, k3 * &w)
}

/// The functional `X -> <X, 1 - p>` whose zero set is the perpendicular
/// bisector of the centre and `p`. The centre lies on the negative side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisector {
    /// Coefficients on `(w, x, y, z')`.
    pub coeffs: [Rat; 4],
}

/// Affine half-space `normal . k <= offset` in Klein coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KleinHalfspace {
    pub normal: [Rat; 3],
    pub offset: Rat,
}

impl Bisector {
    pub fn eval(&self, p: &HypPoint) -> Rat {
        self.coeffs.iter().zip(p.coords()).map(|(c, v)| c * v).sum()
    }

    /// The side containing the centre, `f <= 0`, divided by `w > 0`.
    pub fn klein_halfspace(&self) -> KleinHalfspace {
        let [c0, c1, c2, c3] = self.coeffs.clone();
        KleinHalfspace {
            normal: [c1, c2, c3],
            offset: -c0,
        }
    }
}

pub fn bisector(p: &HypPoint) -> Result<Bisector, HypError> {
    if p.is_origin() {
        return Err(HypError::DegenerateBisector);
    }
    let desc = &p.desc;
    Ok(Bisector {
        coeffs: [
            Rat::one() - &p.w,
            desc.a() * &p.x,
            desc.b() * &p.y,
            desc.abd() * &p.zp,
        ],
    })
}
