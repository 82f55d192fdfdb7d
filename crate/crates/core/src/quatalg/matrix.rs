use core::fmt;
use core::ops::{Add, Mul};

use super::{AlgebraDesc, Quat};
use crate::error::QuatError;
use crate::exactnum::{QuadNum, Surd};

/// 2x2 matrix over `K(sqrt(a), sqrt(b))`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub e: [[Surd; 2]; 2],
}

impl Mat2 {
    pub fn new(s: Surd, t: Surd, u: Surd, v: Surd) -> Self {
        Self {
            e: [[s, t], [u, v]],
        }
    }

    pub fn from_quads(s: QuadNum, t: QuadNum, u: QuadNum, v: QuadNum) -> Self {
        Self::new(
            Surd::from_quad(s),
            Surd::from_quad(t),
            Surd::from_quad(u),
            Surd::from_quad(v),
        )
    }

    pub fn identity(m: i64) -> Self {
        Self::new(Surd::one(m), Surd::zero(m), Surd::zero(m), Surd::one(m))
    }

    pub fn radicand(&self) -> i64 {
        self.e[0][0].radicand()
    }

    pub fn det(&self) -> Surd {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }

    pub fn trace(&self) -> Surd {
        &self.e[0][0] + &self.e[1][1]
    }

    pub fn conj_transpose(&self) -> Self {
        Self::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn entries(&self) -> [&Surd; 4] {
        [&self.e[0][0], &self.e[0][1], &self.e[1][0], &self.e[1][1]]
    }

    /// Sum of the squared absolute values of the entries.
    pub fn frobenius_sq(&self) -> Surd {
        self.entries()
            .iter()
            .fold(Surd::zero(self.radicand()), |acc, x| &acc + &x.abs_sq())
    }

    /// Entries as elements of `K`, when no radicals occur.
    pub fn as_quads(&self) -> Option<[QuadNum; 4]> {
        let [s, t, u, v] = self.entries();
        Some([s.as_quad()?, t.as_quad()?, u.as_quad()?, v.as_quad()?])
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        let (p, q) = (&self.e, &rhs.e);
        let entry = |r: usize, c: usize| &(&p[r][0] * &q[0][c]) + &(&p[r][1] * &q[1][c]);
        Mat2::new(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1))
    }
}

impl Add<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn add(self, rhs: &Mat2) -> Mat2 {
        let (p, q) = (&self.e, &rhs.e);
        Mat2::new(
            &p[0][0] + &q[0][0],
            &p[0][1] + &q[0][1],
            &p[1][0] + &q[1][0],
            &p[1][1] + &q[1][1],
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]
        )
    }
}

struct Radicals {
    sa: Surd,
    sb: Surd,
    sab: Surd,
}

fn radicals(desc: &AlgebraDesc) -> Result<Radicals, QuatError> {
    if !desc.is_normalized() {
        return Err(QuatError::NotNormalized);
    }
    let m = desc.m();
    Ok(Radicals {
        sa: Surd::sqrt_rat(desc.a(), m)?,
        sb: Surd::sqrt_rat(desc.b(), m)?,
        sab: Surd::sqrt_rat(&desc.ab(), m)?,
    })
}

/// The embedding `w + xi + yj + zij -> [[w - x sqrt(a), y sqrt(b) - z sqrt(ab)], [y sqrt(b) + z sqrt(ab), w + x sqrt(a)]]`.
pub fn to_matrix(q: &Quat) -> Result<Mat2, QuatError> {
    let r = radicals(q.desc())?;
    let w = Surd::from_quad(q.w.clone());
    let xa = r.sa.scale(&q.x);
    let yb = r.sb.scale(&q.y);
    let zab = r.sab.scale(&q.z);
    Ok(Mat2::new(&w - &xa, &yb - &zab, &yb + &zab, &w + &xa))
}

/// Inverse of [`to_matrix`]; fails unless the matrix lies in its image.
pub fn from_matrix(mat: &Mat2, desc: &AlgebraDesc) -> Result<Quat, QuatError> {
    if mat.radicand() != desc.m() {
        return Err(QuatError::DescriptorMismatch);
    }
    let r = radicals(desc)?;
    let [s, t, u, v] = mat.entries();
    let half = crate::exactnum::rat(1, 2);
    let coord = |num: Surd, root: &Surd| -> Result<QuadNum, QuatError> {
        let value = num.scale_rat(&half).checked_div(root)?;
        value.as_quad().ok_or(QuatError::NotInImage)
    };
    let one = Surd::one(desc.m());
    let w = coord(v + s, &one)?;
    let x = coord(v - s, &r.sa)?;
    let y = coord(u + t, &r.sb)?;
    let z = coord(u - t, &r.sab)?;
    Quat::new(w, x, y, z, desc)
}

/// `tr(q q^dagger)`, the quantity compared with the Frobenius norm of the image.
pub fn dagger_trace(q: &Quat) -> Result<QuadNum, QuatError> {
    let prod = q.checked_mul(&q.dagger()?)?;
    Ok(prod.trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, Rat};

    fn qn(n: i64) -> QuadNum {
        QuadNum::from_int(n, -1)
    }

    #[test]
    fn identity_and_table_generator() {
        let desc = AlgebraDesc::split(1).unwrap();
        assert_eq!(to_matrix(&Quat::one(&desc)).unwrap(), Mat2::identity(-1));
        let g = from_matrix(&Mat2::from_quads(qn(1), qn(1), qn(1), qn(2)), &desc).unwrap();
        assert_eq!(
            g,
            Quat::from_rats(rat(3, 2), rat(1, 2), int(1), int(0), &desc)
        );
        let h = from_matrix(&Mat2::from_quads(qn(1), qn(2), qn(0), qn(1)), &desc).unwrap();
        assert_eq!(h, Quat::from_rats(int(1), int(0), int(1), int(-1), &desc));
    }

    #[test]
    fn irrational_constants_round_trip() {
        let desc = AlgebraDesc::new(2, rat(3, 2), int(5)).unwrap();
        let m = desc.m();
        let q = Quat::new(
            QuadNum::new(int(1), rat(1, 3), m).unwrap(),
            QuadNum::from_int(-2, m),
            QuadNum::new(Rat::from_integer(0.into()), int(1), m).unwrap(),
            QuadNum::from_int(7, m),
            &desc,
        )
        .unwrap();
        let mat = to_matrix(&q).unwrap();
        assert_eq!(from_matrix(&mat, &desc).unwrap(), q);
        assert_eq!(mat.det().as_quad().unwrap(), q.norm());
        assert_eq!(mat.trace().as_quad().unwrap(), q.trace());
    }

    #[test]
    fn outside_the_image() {
        let desc = AlgebraDesc::new(1, int(2), int(1)).unwrap();
        let mat = Mat2::from_quads(qn(1), qn(0), qn(0), qn(2));
        assert_eq!(from_matrix(&mat, &desc), Err(QuatError::NotInImage));
    }
}
