use num_traits::{Signed, Zero};

use super::{AlgebraDesc, Quat};
use crate::error::QuatError;
use crate::exactnum::{int, is_squarefree, QuadNum, Rat};

/// A base field `K = Q(sqrt(m))` as given by the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub m: i64,
}

impl FieldSpec {
    /// Returns `d` with `K = Q(sqrt(-d))`, or an error if `K` is not imaginary quadratic.
    pub fn imaginary_d(self) -> Result<i64, QuatError> {
        if self.m >= 0 || !is_squarefree(self.m) {
            return Err(QuatError::NotImaginaryQuadratic(self.m));
        }
        Ok(-self.m)
    }
}

/// How a presentation was rescaled: the new generators are
/// `i' = scale_i * i` and `j' = scale_j * j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub desc: AlgebraDesc,
    pub scale_i: QuadNum,
    pub scale_j: QuadNum,
}

impl Normalization {
    /// Rewrites coordinates from the original basis in the normalized one.
    pub fn transport(
        &self,
        w: &QuadNum,
        x: &QuadNum,
        y: &QuadNum,
        z: &QuadNum,
    ) -> Result<Quat, QuatError> {
        let si = self.scale_i.checked_inv()?;
        let sj = self.scale_j.checked_inv()?;
        let sij = &si * &sj;
        Quat::new(w.clone(), x * &si, y * &sj, z * &sij, &self.desc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MacfarlaneVerdict {
    Yes(Normalization),
    /// Non-real structure constants; no decision procedure is attempted.
    Undecided,
}

fn normalize_constant(c: &Rat, d: i64) -> (Rat, QuadNum) {
    if c.is_negative() {
        (-(c * int(d)), QuadNum::sqrt_m(-d))
    } else {
        (c.clone(), QuadNum::one(-d))
    }
}

/// Decides whether `(a, b / K)` is Macfarlane. Algebras with rational
/// constants always are, after replacing a negative constant `c` by `-c d`.
pub fn is_macfarlane(
    field: FieldSpec,
    a: &QuadNum,
    b: &QuadNum,
) -> Result<MacfarlaneVerdict, QuatError> {
    let d = field.imaginary_d()?;
    if a.is_zero() || b.is_zero() {
        return Err(QuatError::ZeroConstant);
    }
    if a.radicand() != -d || b.radicand() != -d {
        return Err(QuatError::DescriptorMismatch);
    }
    if !a.is_rational() || !b.is_rational() {
        return Ok(MacfarlaneVerdict::Undecided);
    }
    let (na, si) = normalize_constant(a.re(), d);
    let (nb, sj) = normalize_constant(b.re(), d);
    let desc = AlgebraDesc::new(d, na, nb)?;
    Ok(MacfarlaneVerdict::Yes(Normalization {
        desc,
        scale_i: si,
        scale_j: sj,
    }))
}

/// `(a, b / Q) tensor K` for `K = Q(sqrt(-d))`, normalized to positive constants.
pub fn extend_to_k(a: &Rat, b: &Rat, d: i64) -> Result<AlgebraDesc, QuatError> {
    if a.is_zero() || b.is_zero() {
        return Err(QuatError::ZeroConstant);
    }
    if d <= 0 || !is_squarefree(d) {
        return Err(QuatError::BadFieldParameter(d));
    }
    let m = -d;
    match is_macfarlane(
        FieldSpec { m },
        &QuadNum::raw(a.clone(), Rat::zero(), m),
        &QuadNum::raw(b.clone(), Rat::zero(), m),
    )? {
        MacfarlaneVerdict::Yes(n) => Ok(n.desc),
        MacfarlaneVerdict::Undecided => unreachable!("rational constants are always decided"),
    }
}
