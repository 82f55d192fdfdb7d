//! Lattice points on trace shells and integrality/congruence tests over the
//! ring of integers `O_d` of `Q(sqrt(-d))`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};

use crate::error::DomainError;
use crate::exactnum::{int, rat, QuadNum, Rat};
use crate::hypmodel::{Dim, HypPoint};
use crate::quatalg::{to_matrix, AlgebraDesc, GroupElem, Quat};

/// Which discrete lattice the shell enumeration runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lattice {
    /// Symmetric integer matrices of determinant 1 (planar model, split algebra).
    Modular,
    /// Hermitian matrices over `O_d` of determinant 1 (split algebra over `Q(sqrt(-d))`).
    Bianchi,
    /// No lattice: shells are read off the orbit points found by word search.
    Orbit,
}

/// Points of the lattice with trace `t`, ordered lexicographically by `(x, y, z')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceShell {
    pub t: Rat,
    pub points: Vec<HypPoint>,
}

fn is_split(desc: &AlgebraDesc) -> bool {
    desc.a() == &int(1) && desc.b() == &int(1)
}

/// Lattice points `p` with `tr(p) = t`, i.e. `w = t/2`.
pub fn shell_solutions(
    desc: &AlgebraDesc,
    t: i64,
    lattice: Lattice,
) -> Result<TraceShell, DomainError> {
    if t < 2 {
        return Err(DomainError::TraceTooSmall(t));
    }
    if !is_split(desc) {
        return Err(DomainError::UnsupportedContext(
            "lattice shells need the split algebra (1, 1)",
        ));
    }
    let w = rat(t, 2);
    let mut points = Vec::new();
    let mut push = |r: i64, y: Rat, zp: Rat, dim: Dim| -> Result<(), DomainError> {
        // matrix [[r, s], [conj s, t - r]] with s = y - z' sqrt(-d) and x = t/2 - r
        let x = &w - int(r);
        points.push(HypPoint::new(desc, dim, w.clone(), x, y, zp)?);
        Ok(())
    };
    match lattice {
        Lattice::Modular => {
            for r in 1..t {
                let n = r * (t - r) - 1;
                let root = n.sqrt();
                if root * root == n {
                    push(r, int(root), Rat::zero(), Dim::Two)?;
                    if root != 0 {
                        push(r, int(-root), Rat::zero(), Dim::Two)?;
                    }
                }
            }
        }
        Lattice::Bianchi => {
            let d = desc.d();
            for r in 1..t {
                let n = r * (t - r) - 1;
                for (y, zp) in norm_solutions(d, n) {
                    push(r, y, zp, Dim::Three)?;
                }
            }
        }
        Lattice::Orbit => {
            return Err(DomainError::UnsupportedContext(
                "orbit shells come from word search",
            ))
        }
    }
    points.sort_by(|p, q| (p.x(), p.y(), p.zp()).cmp(&(q.x(), q.y(), q.zp())));
    Ok(TraceShell { t: int(t), points })
}

/// Pairs `(Re s, -Im s / sqrt(d))` over `s` in `O_d` with `|s|^2 = n`.
fn norm_solutions(d: i64, n: i64) -> Vec<(Rat, Rat)> {
    let mut out = Vec::new();
    if n < 0 {
        return out;
    }
    if d % 4 == 3 {
        // s = (m + k sqrt(-d)) / 2 with m = k mod 2 and m^2 + d k^2 = 4n
        let kmax = (4 * n / d).sqrt();
        for k in -kmax..=kmax {
            let rest = 4 * n - d * k * k;
            if rest < 0 {
                continue;
            }
            let m = rest.sqrt();
            if m * m != rest || (m - k).rem_euclid(2) != 0 {
                continue;
            }
            for m in if m == 0 {
                alloc::vec![0]
            } else {
                alloc::vec![m, -m]
            } {
                out.push((rat(m, 2), rat(-k, 2)));
            }
        }
    } else {
        let kmax = (n / d).sqrt();
        for k in -kmax..=kmax {
            let rest = n - d * k * k;
            if rest < 0 {
                continue;
            }
            let m = rest.sqrt();
            if m * m != rest {
                continue;
            }
            for m in if m == 0 {
                alloc::vec![0]
            } else {
                alloc::vec![m, -m]
            } {
                out.push((int(m), int(-k)));
            }
        }
    }
    out
}

/// Coordinates `(A, B)` of an element `A + B w` of `O_d`, where
/// `w = (1 + sqrt(-d)) / 2` for `d = 3 mod 4` and `w = sqrt(-d)` otherwise.
pub fn od_coords(c: &QuadNum, d: i64) -> Option<(i64, i64)> {
    let (re, im) = (c.re(), c.im());
    let (a, b) = if d % 4 == 3 {
        let b = im * int(2);
        (re - im, b)
    } else {
        (re.clone(), im.clone())
    };
    if !a.is_integer() || !b.is_integer() {
        return None;
    }
    Some((a.to_integer().to_i64()?, b.to_integer().to_i64()?))
}

/// Matrix entries of a split-algebra quaternion in `O_d` coordinates.
pub fn integral_entries(q: &Quat) -> Option<[(i64, i64); 4]> {
    let d = q.desc().d();
    let quads = to_matrix(q).ok()?.as_quads()?;
    let mut out = [(0, 0); 4];
    for (slot, c) in out.iter_mut().zip(&quads) {
        *slot = od_coords(c, d)?;
    }
    Some(out)
}

/// A matrix over `O_d / n`, entries as `(A, B)` residues, up to sign.
type Residue = [(i64, i64); 4];

#[derive(Clone, Copy, Debug)]
struct ResidueRing {
    n: i64,
    d: i64,
}

impl ResidueRing {
    fn reduce(&self, (a, b): (i64, i64)) -> (i64, i64) {
        (a.rem_euclid(self.n), b.rem_euclid(self.n))
    }

    fn add(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        self.reduce((x.0 + y.0, x.1 + y.1))
    }

    fn mul(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        let (a, b, c, e) = (x.0, x.1, y.0, y.1);
        let bb = b * e % self.n;
        if self.d % 4 == 3 {
            // w^2 = w - (1 + d) / 4
            let k = (1 + self.d) / 4 % self.n;
            self.reduce((a * c - bb * k, a * e + b * c + bb))
        } else {
            self.reduce((a * c - bb * (self.d % self.n), a * e + b * c))
        }
    }

    fn mat_mul(&self, p: &Residue, q: &Residue) -> Residue {
        let e = |r: usize, c: usize| {
            self.add(self.mul(p[2 * r], q[c]), self.mul(p[2 * r + 1], q[2 + c]))
        };
        [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
    }

    fn canonical(&self, m: Residue) -> Residue {
        let neg = m.map(|x| self.reduce((-x.0, -x.1)));
        let pos = m.map(|x| self.reduce(x));
        if neg < pos {
            neg
        } else {
            pos
        }
    }
}

/// Images of the group in `PSL_2(O_d / n)` for a few small moduli `n`, used
/// to certify that an element is not in the group.
#[derive(Clone, Debug)]
pub struct CongruenceImages {
    images: Vec<(ResidueRing, BTreeSet<Residue>)>,
}

pub const CONGRUENCE_MODULI: [i64; 5] = [2, 3, 4, 5, 6];

impl CongruenceImages {
    /// `None` when a generator has non-integral entries.
    pub fn new(generators: &[GroupElem], d: i64) -> Option<Self> {
        let gens: Vec<Residue> = generators
            .iter()
            .map(|g| integral_entries(g.quat()))
            .collect::<Option<_>>()?;
        let mut images = Vec::new();
        for n in CONGRUENCE_MODULI {
            let ring = ResidueRing { n, d };
            let gens: Vec<Residue> = gens.iter().map(|g| ring.canonical(*g)).collect();
            let one = ring.canonical([(1, 0), (0, 0), (0, 0), (1, 0)]);
            let mut seen = BTreeSet::from([one]);
            let mut queue = VecDeque::from([one]);
            while let Some(m) = queue.pop_front() {
                for g in &gens {
                    let next = ring.canonical(ring.mat_mul(&m, g));
                    if seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
            images.push((ring, seen));
        }
        Some(Self { images })
    }

    /// The smallest modulus whose image excludes `q`, if any.
    pub fn excluding_modulus(&self, q: &Quat) -> Option<i64> {
        let entries = integral_entries(q)?;
        self.images
            .iter()
            .find(|(ring, image)| !image.contains(&ring.canonical(entries)))
            .map(|(ring, _)| ring.n)
    }

    pub fn sizes(&self) -> Vec<(i64, usize)> {
        self.images.iter().map(|(r, s)| (r.n, s.len())).collect()
    }
}
