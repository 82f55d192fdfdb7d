//! Exact convex polytopes in dimension 2 or 3, maintained by incremental
//! double description: every vertex carries the set of constraints tight at
//! it, and adjacency is decided combinatorially from those sets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::exactnum::Rat;

/// `normal . x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Constraint {
    pub fn slack(&self, p: &[Rat]) -> Rat {
        &self.offset - dot(&self.normal, p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Rat>,
    pub tight: BTreeSet<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AddOutcome {
    /// The constraint cuts the polytope; it was stored under this index.
    Cut(usize),
    /// No vertex violates it strictly.
    Redundant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    constraints: Vec<Constraint>,
    vertices: Vec<Vertex>,
    box_count: usize,
}

pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Rank of a list of vectors, by exact Gaussian elimination.
pub(crate) fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for k in c..cols {
                    let v = &f * &m[r][k];
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

impl Polytope {
    /// The box `|x_k| <= bound` for `k < dim`.
    pub fn cube(dim: usize, bound: &Rat) -> Self {
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3");
        let mut constraints = Vec::new();
        for k in 0..dim {
            for sign in [1, -1] {
                let mut normal = alloc::vec![Rat::zero(); dim];
                normal[k] = Rat::from_integer(sign.into());
                constraints.push(Constraint {
                    normal,
                    offset: bound.clone(),
                });
            }
        }
        let mut vertices = Vec::new();
        for mask in 0..(1usize << dim) {
            let mut point = Vec::with_capacity(dim);
            let mut tight = BTreeSet::new();
            for k in 0..dim {
                if mask & (1 << k) == 0 {
                    point.push(bound.clone());
                    tight.insert(2 * k);
                } else {
                    point.push(-bound.clone());
                    tight.insert(2 * k + 1);
                }
            }
            vertices.push(Vertex { point, tight });
        }
        Self {
            dim,
            constraints,
            vertices,
            box_count: 2 * dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of leading bounding-box constraints.
    pub fn box_count(&self) -> usize {
        self.box_count
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.constraints.iter().all(|c| !c.slack(p).is_negative())
    }

    pub fn contains_strictly(&self, p: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.slack(p).is_positive())
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        let common: BTreeSet<usize> = self.vertices[i]
            .tight
            .intersection(&self.vertices[j].tight)
            .copied()
            .collect();
        if common.len() + 1 < self.dim {
            return false;
        }
        let normals: Vec<Vec<Rat>> = common
            .iter()
            .map(|&c| self.constraints[c].normal.clone())
            .collect();
        if rank(&normals) + 1 != self.dim {
            return false;
        }
        self.vertices
            .iter()
            .enumerate()
            .all(|(k, v)| k == i || k == j || !common.is_subset(&v.tight))
    }

    /// Edges as pairs of vertex indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Intersects with `c`. The result must stay nonempty.
    pub fn add(&mut self, c: Constraint) -> AddOutcome {
        assert_eq!(c.normal.len(), self.dim);
        let slacks: Vec<Rat> = self.vertices.iter().map(|v| c.slack(&v.point)).collect();
        if slacks.iter().all(|s| !s.is_negative()) {
            return AddOutcome::Redundant;
        }
        let idx = self.constraints.len();
        let outside: Vec<usize> = (0..slacks.len())
            .filter(|&i| slacks[i].is_negative())
            .collect();
        let inside: Vec<usize> = (0..slacks.len())
            .filter(|&i| slacks[i].is_positive())
            .collect();
        let mut fresh = Vec::new();
        for &o in &outside {
            for &i in &inside {
                if !self.adjacent(o, i) {
                    continue;
                }
                let (po, pi) = (&self.vertices[o].point, &self.vertices[i].point);
                let t = &slacks[i] / (&slacks[i] - &slacks[o]);
                let dir = sub(po, pi);
                let point: Vec<Rat> = pi.iter().zip(&dir).map(|(a, d)| a + &t * d).collect();
                let mut tight: BTreeSet<usize> = self.vertices[o]
                    .tight
                    .intersection(&self.vertices[i].tight)
                    .copied()
                    .collect();
                tight.insert(idx);
                fresh.push(Vertex { point, tight });
            }
        }
        let mut kept = Vec::new();
        for (k, v) in self.vertices.drain(..).enumerate() {
            match slacks[k].sign_cmp() {
                Ordering::Less => {}
                Ordering::Equal => {
                    let mut v = v;
                    v.tight.insert(idx);
                    kept.push(v);
                }
                Ordering::Greater => kept.push(v),
            }
        }
        kept.extend(fresh);
        kept.sort_by(|a, b| a.point.cmp(&b.point));
        kept.dedup_by(|a, b| {
            if a.point == b.point {
                b.tight.extend(a.tight.iter().copied());
                true
            } else {
                false
            }
        });
        self.vertices = kept;
        self.constraints.push(c);
        AddOutcome::Cut(idx)
    }

    /// Vertices on the face of constraint `c`.
    pub fn face(&self, c: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].tight.contains(&c))
            .collect()
    }

    /// True when constraint `c` supports a facet (codimension one face).
    pub fn is_facet(&self, c: usize) -> bool {
        let face = self.face(c);
        if face.len() < self.dim {
            return false;
        }
        let base = &self.vertices[face[0]].point;
        let diffs: Vec<Vec<Rat>> = face[1..]
            .iter()
            .map(|&v| sub(&self.vertices[v].point, base))
            .collect();
        rank(&diffs) + 1 == self.dim
    }

    /// Minimum over the face of `c` of the diagonal form `sum q_k x_k^2`.
    pub fn face_min_quadratic(&self, c: usize, q: &[Rat]) -> Option<Rat> {
        let face = self.face(c);
        if face.is_empty() {
            return None;
        }
        let form = |p: &[Rat]| -> Rat { p.iter().zip(q).map(|(x, w)| w * x * x).sum() };
        let con = &self.constraints[c];
        // unconstrained minimiser on the hyperplane: x = offset D^-1 n / (n^T D^-1 n)
        let dn: Vec<Rat> = con.normal.iter().zip(q).map(|(n, w)| n / w).collect();
        let denom = dot(&con.normal, &dn);
        if !denom.is_zero() {
            let foot: Vec<Rat> = dn.iter().map(|x| x * &con.offset / &denom).collect();
            if self.contains(&foot) {
                return Some(form(&foot));
            }
        }
        let mut best: Option<Rat> = None;
        let mut consider = |v: Rat| {
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        };
        for &v in &face {
            consider(form(&self.vertices[v].point));
        }
        for (i, j) in self.edges() {
            if !(self.vertices[i].tight.contains(&c) && self.vertices[j].tight.contains(&c)) {
                continue;
            }
            let (p, r) = (&self.vertices[i].point, &self.vertices[j].point);
            let d = sub(r, p);
            let dd: Rat = d.iter().zip(q).map(|(x, w)| w * x * x).sum();
            let pd: Rat = p.iter().zip(&d).zip(q).map(|((x, y), w)| w * x * y).sum();
            if dd.is_zero() {
                continue;
            }
            let s = -pd / &dd;
            if s.is_positive() && s < Rat::one() {
                let point: Vec<Rat> = p.iter().zip(&d).map(|(x, y)| x + &s * y).collect();
                consider(form(&point));
            }
        }
        best
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for Rat {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&Rat::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn c(normal: &[i64], offset: Rat) -> Constraint {
        Constraint {
            normal: normal.iter().map(|&n| int(n)).collect(),
            offset,
        }
    }

    #[test]
    fn square_cut_to_triangle() {
        let mut p = Polytope::cube(2, &int(1));
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.add(c(&[1, 1], int(0))), AddOutcome::Cut(4));
        let mut pts: Vec<Vec<Rat>> = p.vertices().iter().map(|v| v.point.clone()).collect();
        pts.sort();
        assert_eq!(
            pts,
            [[int(-1), int(-1)], [int(-1), int(1)], [int(1), int(-1)]].map(|a| a.to_vec())
        );
        assert!(p.is_facet(4));
        assert!(!p.is_facet(0));
        assert_eq!(p.add(c(&[1, 1], int(0))), AddOutcome::Redundant);
        assert_eq!(p.add(c(&[1, 0], int(5))), AddOutcome::Redundant);
    }

    #[test]
    fn cube_corner_cut() {
        let mut p = Polytope::cube(3, &int(1));
        assert_eq!(p.edges().len(), 12);
        p.add(c(&[1, 1, 1], int(2)));
        assert_eq!(p.vertices().len(), 10);
        assert_eq!(p.edges().len(), 15);
        assert!(p.is_facet(6));
        // cutting through a vertex keeps it and marks it tight
        p.add(c(&[1, 0, 0], int(0)));
        assert!(p.vertices().iter().all(|v| v.point[0] <= int(0)));
        assert_eq!(p.edges().len(), 12);
    }

    #[test]
    fn face_minimum() {
        let mut p = Polytope::cube(2, &int(2));
        p.add(c(&[1, 0], rat(1, 2)));
        let q = [int(1), int(1)];
        assert_eq!(p.face_min_quadratic(4, &q), Some(rat(1, 4)));
        // the foot of the perpendicular is cut away; the minimum moves to a corner
        p.add(c(&[0, -1], int(-1)));
        assert_eq!(p.face_min_quadratic(4, &q), Some(rat(5, 4)));
    }
}
