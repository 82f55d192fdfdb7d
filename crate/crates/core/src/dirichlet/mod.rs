//! Dirichlet domains centred at `1`, built by scanning lattice points of the
//! quaternion hyperboloid in order of increasing trace.

mod domain;
mod lattice;
mod words;

pub use domain::{
    compute_domain, DomainReport, DomainState, EntryAction, HalfspaceRecord, HalfspaceStatus,
    Pairing, Provenance, ShellEntry, Snapshot, Topology,
};
pub use lattice::{
    integral_entries, od_coords, shell_solutions, CongruenceImages, Lattice, TraceShell,
    CONGRUENCE_MODULI,
};
pub use words::{point_key, PointKey, WordBall};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::DomainError;
use crate::exactnum::{int, QuadNum};
use crate::hypmodel::{Dim, HypPoint};
use crate::quatalg::{dagger_trace, to_matrix, AlgebraDesc, GroupElem};

/// Ambient groups with a closed-form membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AmbientPredicate {
    /// Integral matrices of determinant 1 with `|tr| >= 2`.
    Psl2zNonElliptic,
    /// `PSL_2(O_d)`.
    Bianchi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Ambient(AmbientPredicate),
    /// Found among words of length `<= depth`, or excluded by a congruence image.
    WordBfs {
        depth: usize,
    },
}

/// A finitely generated subgroup of the norm-one group, with the tests the
/// domain engine needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupInput {
    pub name: String,
    pub desc: AlgebraDesc,
    pub dim: Dim,
    pub generators: Vec<GroupElem>,
    pub membership: Membership,
    pub lattice: Lattice,
    /// Closed under complex conjugation (transposition in the planar case).
    pub conj_closed: bool,
}

impl GroupInput {
    pub fn validate(&self) -> Result<(), DomainError> {
        for g in &self.generators {
            if g.quat().desc() != &self.desc {
                return Err(crate::error::QuatError::DescriptorMismatch.into());
            }
            if self.dim == Dim::Two && !g.quat().coords().iter().all(|c| c.is_rational()) {
                return Err(DomainError::BadGroup("planar groups need real generators"));
            }
        }
        match (self.lattice, self.dim) {
            (Lattice::Modular, Dim::Three) => {
                Err(DomainError::UnsupportedContext("modular lattice is planar"))
            }
            (Lattice::Bianchi, Dim::Two) => Err(DomainError::UnsupportedContext(
                "Bianchi lattice is spatial",
            )),
            _ => Ok(()),
        }
    }
}

/// Outcome of a membership query for a lattice point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemberVerdict {
    Admitted,
    /// Excluded by the ambient predicate or, if set, by the image modulo `n`.
    Rejected(Option<i64>),
    Undecided,
}

impl fmt::Display for MemberVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemberVerdict::Admitted => f.write_str("admitted"),
            MemberVerdict::Rejected(Some(n)) => write!(f, "rejected (mod {n})"),
            MemberVerdict::Rejected(None) => f.write_str("rejected"),
            MemberVerdict::Undecided => f.write_str("undecided"),
        }
    }
}

/// Direction class `[x : y : z']` of a point, up to positive scaling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopeKey(pub [BigInt; 3]);

impl fmt::Display for SlopeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.0;
        if z.is_zero() {
            write!(f, "[{x},{y}]")
        } else {
            write!(f, "[{x},{y},{z}]")
        }
    }
}

pub fn slope_key(p: &HypPoint) -> Result<SlopeKey, DomainError> {
    let coords = [p.x(), p.y(), p.zp()];
    if coords.iter().all(|c| c.is_zero()) {
        return Err(DomainError::CentralElement);
    }
    let lcm = coords
        .iter()
        .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints = coords.map(|c| (c * crate::exactnum::Rat::from_integer(lcm.clone())).to_integer());
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    Ok(SlopeKey(ints.map(|n| n / &g)))
}

/// `tr(g g^dagger)`, checked against the squared entries of the matrix image.
pub fn frobenius_check(g: &GroupElem) -> Result<QuadNum, DomainError> {
    let tr = dagger_trace(g.quat())?;
    let desc = g.quat().desc();
    if desc.a() == &int(1) && desc.b() == &int(1) {
        let fro = to_matrix(g.quat())?.frobenius_sq();
        if fro.as_quad().as_ref() != Some(&tr) {
            return Err(DomainError::FrobeniusMismatch);
        }
    }
    Ok(tr)
}

/// Membership tests prepared once per group.
#[derive(Clone, Debug)]
pub struct MembershipOracle {
    membership: Membership,
    ball: WordBall,
    congruence: Option<CongruenceImages>,
}

impl MembershipOracle {
    pub fn new(group: &GroupInput, ball: WordBall) -> Self {
        let congruence = match group.membership {
            Membership::WordBfs { .. } if group.lattice != Lattice::Orbit => {
                CongruenceImages::new(&group.generators, group.desc.d())
            }
            _ => None,
        };
        Self {
            membership: group.membership,
            ball,
            congruence,
        }
    }

    pub fn ball(&self) -> &WordBall {
        &self.ball
    }

    pub fn congruence(&self) -> Option<&CongruenceImages> {
        self.congruence.as_ref()
    }

    /// Membership of a lattice point (a norm-one element fixed by the involution).
    pub fn verdict(&self, p: &HypPoint) -> Result<MemberVerdict, DomainError> {
        let q = p.to_quat();
        let Some(entries) = integral_entries(&q) else {
            return Ok(MemberVerdict::Rejected(None));
        };
        match self.membership {
            Membership::Ambient(AmbientPredicate::Psl2zNonElliptic) => {
                let real = entries.iter().all(|e| e.1 == 0);
                let tr = entries[0].0 + entries[3].0;
                Ok(if real && tr.abs() >= 2 {
                    MemberVerdict::Admitted
                } else {
                    MemberVerdict::Rejected(None)
                })
            }
            Membership::Ambient(AmbientPredicate::Bianchi) => Ok(MemberVerdict::Admitted),
            Membership::WordBfs { .. } => {
                let g = GroupElem::new(q)?;
                if self.ball.contains(&g) {
                    return Ok(MemberVerdict::Admitted);
                }
                match self
                    .congruence
                    .as_ref()
                    .and_then(|c| c.excluding_modulus(g.quat()))
                {
                    Some(n) => Ok(MemberVerdict::Rejected(Some(n))),
                    None => Ok(MemberVerdict::Undecided),
                }
            }
        }
    }
}

/// Lattice points of a shell that lie in the group, with the rest split into
/// rejected and undecided.
pub fn filter_group_points(
    shell: &TraceShell,
    oracle: &MembershipOracle,
) -> Result<Vec<(HypPoint, MemberVerdict)>, DomainError> {
    shell
        .points
        .iter()
        .map(|p| Ok((p.clone(), oracle.verdict(p)?)))
        .collect()
}

/// `delta` with `delta delta^dagger = p`, if one is among the enumerated words.
pub fn orbit_factor<'a>(p: &HypPoint, ball: &'a WordBall) -> Option<&'a GroupElem> {
    ball.factor(p)
}

pub(crate) fn trace_of(p: &HypPoint) -> crate::exactnum::Rat {
    p.w() * int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::quatalg::{from_matrix, Mat2};
    use alloc::string::ToString;

    fn plane() -> AlgebraDesc {
        AlgebraDesc::split(1).unwrap()
    }

    fn pt(w: crate::exactnum::Rat, x: crate::exactnum::Rat, y: crate::exactnum::Rat) -> HypPoint {
        HypPoint::new(&plane(), Dim::Two, w, x, y, int(0)).unwrap()
    }

    fn mat(a: i64, b: i64, c: i64, d: i64) -> GroupElem {
        let q = |n| QuadNum::from_int(n, -1);
        GroupElem::new(from_matrix(&Mat2::from_quads(q(a), q(b), q(c), q(d)), &plane()).unwrap())
            .unwrap()
    }

    #[test]
    fn slopes() {
        let key = slope_key(&pt(rat(15, 2), rat(11, 2), int(5))).unwrap();
        assert_eq!(key.0, [11, 10, 0].map(BigInt::from));
        assert_eq!(key.to_string(), "[11,10]");
        assert_eq!(
            slope_key(&pt(int(3), int(2), int(2))).unwrap().0,
            [1, 1, 0].map(BigInt::from)
        );
        assert_eq!(
            slope_key(&pt(rat(3, 2), rat(-1, 2), int(-1))).unwrap().0,
            [-1, -2, 0].map(BigInt::from)
        );
        assert_eq!(
            slope_key(&HypPoint::origin(&plane(), Dim::Two)),
            Err(DomainError::CentralElement)
        );
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(
            frobenius_check(&GroupElem::identity(&plane())).unwrap(),
            QuadNum::from_int(2, -1)
        );
        assert_eq!(
            frobenius_check(&mat(1, 2, 0, 1)).unwrap(),
            QuadNum::from_int(6, -1)
        );
        assert_eq!(
            frobenius_check(&mat(1, 1, 1, 2)).unwrap(),
            QuadNum::from_int(7, -1)
        );
    }

    #[test]
    fn factoring_orbit_points() {
        let desc = AlgebraDesc::split(1).unwrap();
        let gens = [
            mat(1, 2, 0, 1),
            GroupElem::new(
                from_matrix(
                    &Mat2::from_quads(
                        QuadNum::from_int(1, -1),
                        QuadNum::sqrt_m(-1),
                        QuadNum::zero(-1),
                        QuadNum::from_int(1, -1),
                    ),
                    &desc,
                )
                .unwrap(),
            )
            .unwrap(),
        ];
        let ball = WordBall::new(&desc, &gens, 2, Dim::Three).unwrap();
        let p = HypPoint::new(&desc, Dim::Three, int(3), int(-2), int(2), int(0)).unwrap();
        assert_eq!(orbit_factor(&p, &ball), Some(&gens[0]));
        let o = HypPoint::origin(&desc, Dim::Three);
        assert!(orbit_factor(&o, &ball).unwrap().is_identity());
        let torus =
            WordBall::new(&desc, &[mat(1, 1, 1, 2), mat(1, -1, -1, 2)], 3, Dim::Two).unwrap();
        let g = pt(rat(3, 2), rat(1, 2), int(1));
        assert_eq!(orbit_factor(&g, &torus), None);
        assert!(orbit_factor(&pt(rat(7, 2), rat(3, 2), int(3)), &torus).is_some());
        assert!(torus.stabilizer().is_empty());
    }
}
