//! Breadth-first enumeration of short words in the generators.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::DomainError;
use crate::exactnum::Rat;
use crate::hypmodel::{act, Dim, HypPoint};
use crate::quatalg::{AlgebraDesc, GroupElem, QuatKey};

/// Key of a hyperboloid point: `(w, x, y, z')`.
pub type PointKey = [Rat; 4];

pub fn point_key(p: &HypPoint) -> PointKey {
    p.coords().map(Clone::clone)
}

/// All group elements of word length at most `depth`, and the orbit points
/// `g g^dagger` they produce.
#[derive(Clone, Debug)]
pub struct WordBall {
    depth: usize,
    elements: BTreeMap<QuatKey, (GroupElem, usize)>,
    /// Orbit point -> shortest element reaching it (ties broken by key).
    orbit: BTreeMap<PointKey, (HypPoint, GroupElem, usize)>,
    /// Nontrivial elements fixing the centre.
    stabilizer: Vec<GroupElem>,
}

impl WordBall {
    pub fn new(
        desc: &AlgebraDesc,
        generators: &[GroupElem],
        depth: usize,
        dim: Dim,
    ) -> Result<Self, DomainError> {
        if generators.iter().any(|g| g.quat().desc() != desc) {
            return Err(crate::error::QuatError::DescriptorMismatch.into());
        }
        let mut letters: Vec<GroupElem> = Vec::new();
        for g in generators {
            for h in [g.clone(), g.inverse()] {
                if !letters.contains(&h) {
                    letters.push(h);
                }
            }
        }
        letters.sort_by_key(GroupElem::key);
        let origin = HypPoint::origin(desc, dim);
        let identity = GroupElem::identity(desc);
        let mut ball = Self {
            depth,
            elements: BTreeMap::from([(identity.key(), (identity.clone(), 0))]),
            orbit: BTreeMap::new(),
            stabilizer: Vec::new(),
        };
        ball.record(&origin, identity, 0)?;
        let mut frontier = alloc::vec![GroupElem::identity(desc)];
        for level in 1..=depth {
            let mut next = Vec::new();
            for g in &frontier {
                for l in &letters {
                    let h = g.compose(l)?;
                    let key = h.key();
                    if ball.elements.contains_key(&key) {
                        continue;
                    }
                    ball.elements.insert(key, (h.clone(), level));
                    next.push(h);
                }
            }
            next.sort_by_key(GroupElem::key);
            for h in &next {
                ball.record(&origin, h.clone(), level)?;
            }
            frontier = next;
        }
        Ok(ball)
    }

    fn record(&mut self, origin: &HypPoint, g: GroupElem, level: usize) -> Result<(), DomainError> {
        let p = act(&g, origin)?;
        if p.is_origin() && !g.is_identity() {
            self.stabilizer.push(g.clone());
        }
        let key = point_key(&p);
        let better = match self.orbit.get(&key) {
            None => true,
            Some((_, old, old_level)) => (level, g.key()) < (*old_level, old.key()),
        };
        if better {
            self.orbit.insert(key, (p, g, level));
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        self.elements.contains_key(&g.key())
    }

    pub fn elements(&self) -> impl Iterator<Item = (&GroupElem, usize)> {
        self.elements.values().map(|(g, l)| (g, *l))
    }

    /// An element `delta` of the ball with `delta delta^dagger = p`.
    pub fn factor(&self, p: &HypPoint) -> Option<&GroupElem> {
        self.orbit.get(&point_key(p)).map(|(_, g, _)| g)
    }

    pub fn orbit_points(&self) -> impl Iterator<Item = (&HypPoint, &GroupElem)> {
        self.orbit.values().map(|(p, g, _)| (p, g))
    }

    pub fn stabilizer(&self) -> &[GroupElem] {
        &self.stabilizer
    }
}
