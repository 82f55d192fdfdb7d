use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{
    filter_group_points, point_key, shell_solutions, slope_key, trace_of, GroupInput, Lattice,
    MemberVerdict, MembershipOracle, SlopeKey, TraceShell, WordBall,
};
use crate::error::DomainError;
use crate::exactnum::{int, QuadNum, Rat};
use crate::hypmodel::{act, bisector, Dim, HypPoint};
use crate::polytope::{AddOutcome, Constraint, Polytope};
use crate::quatalg::{AlgebraDesc, GroupElem, Quat};

/// How a half-space arose from a lattice point `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// `p = delta delta^dagger` is an orbit point; the bisector of `1` and `p`.
    Orbit,
    /// `p` is a group element; the bisector of `1` and `p^2`, which passes through `p`.
    Midpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HalfspaceStatus {
    /// Supports a facet of the polytope that meets hyperbolic space.
    Side,
    Redundant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceRecord {
    /// The element `g` whose translate `g . 1` is the witness.
    pub contributor: GroupElem,
    pub witness: HypPoint,
    pub provenance: Provenance,
    /// Lattice point that produced the half-space, and its trace.
    pub source: HypPoint,
    pub found_at: Rat,
    /// Klein-coordinate form, `normal . k <= offset`.
    pub constraint: Constraint,
    /// Index in the polytope, if the half-space cut it when added.
    pub poly_index: Option<usize>,
    pub status: HalfspaceStatus,
}

/// Incrementally built intersection of Dirichlet half-spaces around `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainState {
    desc: AlgebraDesc,
    dim: Dim,
    polytope: Polytope,
    halfspaces: Vec<HalfspaceRecord>,
    slopes: BTreeMap<SlopeKey, Rat>,
}

/// Coefficients of the ellipsoid `sum q_k k_k^2 < 1` in Klein coordinates.
pub(crate) fn ellipsoid(desc: &AlgebraDesc, dim: Dim) -> Vec<Rat> {
    let mut q = alloc::vec![desc.a().clone(), desc.b().clone()];
    if dim == Dim::Three {
        q.push(desc.abd());
    }
    q
}

impl DomainState {
    pub fn new(desc: &AlgebraDesc, dim: Dim) -> Self {
        let q = ellipsoid(desc, dim);
        let least = q.iter().min().cloned().unwrap_or_else(Rat::one);
        // a box strictly outside the ellipsoid
        let mut bound = Rat::one();
        while &bound * &bound * &least <= Rat::one() {
            bound += Rat::one();
        }
        Self {
            desc: desc.clone(),
            dim,
            polytope: Polytope::cube(dim.rank(), &bound),
            halfspaces: Vec::new(),
            slopes: BTreeMap::new(),
        }
    }

    pub fn desc(&self) -> &AlgebraDesc {
        &self.desc
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn halfspaces(&self) -> &[HalfspaceRecord] {
        &self.halfspaces
    }

    pub fn ellipsoid(&self) -> Vec<Rat> {
        ellipsoid(&self.desc, self.dim)
    }

    /// Least trace at which a contributing point of this slope was seen.
    pub fn slope_trace(&self, key: &SlopeKey) -> Option<&Rat> {
        self.slopes.get(key)
    }

    pub fn register_slope(&mut self, key: SlopeKey, trace: Rat) {
        self.slopes.entry(key).or_insert(trace);
    }

    /// Intersects with the Dirichlet half-space of `witness = g . 1`.
    /// Adding the same witness again returns the existing record.
    pub fn add_halfspace(
        &mut self,
        contributor: &GroupElem,
        witness: &HypPoint,
        provenance: Provenance,
        source: &HypPoint,
    ) -> Result<usize, DomainError> {
        if witness.desc() != &self.desc || witness.dim() != self.dim {
            return Err(crate::error::HypError::ModelMismatch.into());
        }
        if act(contributor, &HypPoint::origin(&self.desc, self.dim))? != *witness {
            return Err(DomainError::WitnessMismatch);
        }
        if let Some(i) = self.halfspaces.iter().position(|h| h.witness == *witness) {
            return Ok(i);
        }
        let hs = bisector(witness)?.klein_halfspace();
        let rank = self.dim.rank();
        let constraint = Constraint {
            normal: hs.normal[..rank].to_vec(),
            offset: hs.offset,
        };
        let poly_index = match self.polytope.add(constraint.clone()) {
            AddOutcome::Cut(i) => Some(i),
            AddOutcome::Redundant => None,
        };
        self.halfspaces.push(HalfspaceRecord {
            contributor: contributor.clone(),
            witness: witness.clone(),
            provenance,
            source: source.clone(),
            found_at: trace_of(source),
            constraint,
            poly_index,
            status: HalfspaceStatus::Redundant,
        });
        self.refresh_statuses();
        Ok(self.halfspaces.len() - 1)
    }

    fn refresh_statuses(&mut self) {
        let q = self.ellipsoid();
        for h in &mut self.halfspaces {
            h.status = match h.poly_index {
                Some(c) if self.polytope.is_facet(c) => {
                    match self.polytope.face_min_quadratic(c, &q) {
                        Some(m) if m < Rat::one() => HalfspaceStatus::Side,
                        _ => HalfspaceStatus::Redundant,
                    }
                }
                _ => HalfspaceStatus::Redundant,
            };
        }
    }

    pub fn sides(&self) -> impl Iterator<Item = (usize, &HalfspaceRecord)> {
        self.halfspaces
            .iter()
            .enumerate()
            .filter(|(_, h)| h.status == HalfspaceStatus::Side)
    }

    fn klein_form(&self, p: &[Rat]) -> Rat {
        p.iter().zip(self.ellipsoid()).map(|(x, w)| w * x * x).sum()
    }

    /// Every polytope vertex lies in the closed ellipsoid.
    pub fn is_bounded(&self) -> bool {
        self.polytope
            .vertices()
            .iter()
            .all(|v| self.klein_form(&v.point) <= Rat::one())
    }

    pub fn contains_centre_strictly(&self) -> bool {
        self.polytope
            .contains_strictly(&alloc::vec![Rat::zero(); self.dim.rank()])
    }

    /// Linear action of `g` on homogeneous coordinates `(w, x, y, z')`.
    fn linear_action(&self, g: &GroupElem) -> Result<[[Rat; 4]; 4], DomainError> {
        let m = self.desc.m();
        let q = g.quat();
        let qd = q.dagger()?;
        let basis = [
            Quat::basis(0, &self.desc),
            Quat::basis(1, &self.desc),
            Quat::basis(2, &self.desc),
            Quat::basis(3, &self.desc).scale(&QuadNum::sqrt_m(m)),
        ];
        let mut cols: [[Rat; 4]; 4] = Default::default();
        for (k, e) in basis.iter().enumerate() {
            let image = q.checked_mul(e)?.checked_mul(&qd)?;
            cols[k] = [
                image.w.re().clone(),
                image.x.re().clone(),
                image.y.re().clone(),
                image.z.im().clone(),
            ];
        }
        Ok(cols)
    }

    /// Image of a Klein point under `g`, if it stays in the affine chart.
    fn map_klein(&self, cols: &[[Rat; 4]; 4], k: &[Rat]) -> Option<Vec<Rat>> {
        let mut lift = [Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()];
        for (slot, v) in lift[1..].iter_mut().zip(k) {
            *slot = v.clone();
        }
        let mut image = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
        for (col, coef) in cols.iter().zip(&lift) {
            for (acc, c) in image.iter_mut().zip(col) {
                *acc += c * coef;
            }
        }
        if !image[0].is_positive() {
            return None;
        }
        Some(
            image[1..=self.dim.rank()]
                .iter()
                .map(|c| c / &image[0])
                .collect(),
        )
    }

    /// Partner of each side: the side whose witness is `g^-1 . 1`.
    pub fn side_pairings(&self) -> Result<Vec<Pairing>, DomainError> {
        let origin = HypPoint::origin(&self.desc, self.dim);
        let by_witness: BTreeMap<_, usize> = self
            .sides()
            .map(|(i, h)| (point_key(&h.witness), i))
            .collect();
        let mut out = Vec::new();
        for (i, h) in self.sides() {
            let inv = h.contributor.inverse();
            let target = act(&inv, &origin)?;
            let partner = by_witness.get(&point_key(&target)).copied();
            let geometric_match = match partner {
                Some(j) => self.face_maps_onto(i, j, &inv)?,
                None => false,
            };
            out.push(Pairing {
                side: i,
                partner,
                geometric_match,
            });
        }
        Ok(out)
    }

    /// Vertices of side `i` in the closed ellipsoid map to vertices of side `j`.
    fn face_maps_onto(&self, i: usize, j: usize, g: &GroupElem) -> Result<bool, DomainError> {
        let (Some(ci), Some(cj)) = (self.halfspaces[i].poly_index, self.halfspaces[j].poly_index)
        else {
            return Ok(false);
        };
        let cols = self.linear_action(g)?;
        let verts = self.polytope.vertices();
        let target: BTreeSet<&Vec<Rat>> = self
            .polytope
            .face(cj)
            .into_iter()
            .map(|v| &verts[v].point)
            .collect();
        for v in self.polytope.face(ci) {
            let p = &verts[v].point;
            if self.klein_form(p) > Rat::one() {
                continue;
            }
            match self.map_klein(&cols, p) {
                Some(image) if target.contains(&image) => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Vertex cycles and genus of the quotient surface (planar model only).
    pub fn topology(&self, pairings: &[Pairing]) -> Result<Option<Topology>, DomainError> {
        if self.dim != Dim::Two || !self.is_bounded() || pairings.is_empty() {
            return Ok(None);
        }
        if pairings
            .iter()
            .any(|p| !p.geometric_match || p.partner == Some(p.side))
        {
            return Ok(None);
        }
        let partner: BTreeMap<usize, usize> = pairings
            .iter()
            .filter_map(|p| Some((p.side, p.partner?)))
            .collect();
        let by_constraint: BTreeMap<usize, usize> = self
            .sides()
            .filter_map(|(i, h)| Some((h.poly_index?, i)))
            .collect();
        let verts = self.polytope.vertices();
        let sides_at = |v: usize| -> Vec<usize> {
            verts[v]
                .tight
                .iter()
                .filter_map(|c| by_constraint.get(c).copied())
                .collect()
        };
        let index_of: BTreeMap<&Vec<Rat>, usize> = verts
            .iter()
            .enumerate()
            .map(|(i, v)| (&v.point, i))
            .collect();
        let mut states: Vec<(usize, usize)> = Vec::new();
        for (v, _) in verts.iter().enumerate() {
            let here = sides_at(v);
            if here.is_empty() {
                continue;
            }
            if here.len() != 2 {
                return Ok(None);
            }
            states.extend(here.into_iter().map(|s| (v, s)));
        }
        let mut actions = BTreeMap::new();
        for (i, h) in self.sides() {
            actions.insert(i, self.linear_action(&h.contributor.inverse())?);
        }
        let mut seen = BTreeSet::new();
        let (mut ideal, mut finite) = (0usize, 0usize);
        for &start in &states {
            if seen.contains(&start) {
                continue;
            }
            let mut cur = start;
            let mut is_ideal = false;
            loop {
                seen.insert(cur);
                let (v, s) = cur;
                is_ideal |= self.klein_form(&verts[v].point) == Rat::one();
                let Some(image) = self.map_klein(&actions[&s], &verts[v].point) else {
                    return Ok(None);
                };
                let Some(&v2) = index_of.get(&image) else {
                    return Ok(None);
                };
                let s2 = partner[&s];
                let Some(&next) = sides_at(v2).iter().find(|&&t| t != s2) else {
                    return Ok(None);
                };
                seen.insert((v2, s2));
                cur = (v2, next);
                if cur == start {
                    break;
                }
                if seen.contains(&cur) {
                    return Ok(None);
                }
            }
            if is_ideal {
                ideal += 1;
            } else {
                finite += 1;
            }
        }
        let sides = pairings.len();
        let pairs = sides / 2;
        let twice_genus = 1 + pairs as i64 - (ideal + finite) as i64;
        let genus = (twice_genus >= 0 && twice_genus % 2 == 0).then_some(twice_genus / 2);
        Ok(Some(Topology {
            sides,
            side_pairs: pairs,
            ideal_cycles: ideal,
            finite_cycles: finite,
            genus,
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub side: usize,
    /// `None` flags an unpaired side.
    pub partner: Option<usize>,
    /// The pairing element carries the side's vertices onto the partner's.
    pub geometric_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    pub sides: usize,
    pub side_pairs: usize,
    /// Vertex cycles at infinity (punctures).
    pub ideal_cycles: usize,
    pub finite_cycles: usize,
    pub genus: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryAction {
    Centre,
    /// Contributed the half-space with this index.
    Added(usize),
    /// Slope already contributed at this smaller trace.
    SlopeSeen(Rat),
    /// Not in the group, or membership undecided.
    Excluded,
}

/// One lattice point of a shell, with what the engine made of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellEntry {
    pub trace: Rat,
    pub point: HypPoint,
    pub slope: Option<SlopeKey>,
    pub verdict: MemberVerdict,
    /// `delta` with `delta delta^dagger = point`, when found.
    pub orbit: Option<GroupElem>,
    pub action: EntryAction,
}

/// Polytope after all shells up to `trace` were processed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub trace: Rat,
    pub constraint_count: usize,
    pub vertices: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug)]
pub struct DomainReport {
    pub group_name: String,
    pub max_trace: i64,
    pub bfs_depth: usize,
    pub state: DomainState,
    pub ledger: Vec<ShellEntry>,
    pub history: Vec<Snapshot>,
    pub undecided: Vec<HypPoint>,
    pub pairings: Vec<Pairing>,
    pub topology: Option<Topology>,
    /// Nontrivial word-ball elements fixing the centre.
    pub stabilizer: Vec<GroupElem>,
    pub ball_size: usize,
}

impl DomainReport {
    /// No undecided points, every side paired onto its partner, and the
    /// polytope closed up inside the model.
    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
            && self.state.is_bounded()
            && self
                .pairings
                .iter()
                .all(|p| p.partner.is_some() && p.geometric_match)
    }

    /// Each snapshot's region contains the next one.
    pub fn monotone_truncation(&self) -> bool {
        let cons = self.state.polytope().constraints();
        self.history.windows(2).all(|w| {
            let earlier = &cons[..w[0].constraint_count];
            w[1].vertices
                .iter()
                .all(|v| earlier.iter().all(|c| !c.slack(v).is_negative()))
        }) && self
            .history
            .iter()
            .all(|s| s.constraint_count <= cons.len())
    }

    pub fn unpaired(&self) -> impl Iterator<Item = &Pairing> {
        self.pairings.iter().filter(|p| p.partner.is_none())
    }
}

fn shells(
    group: &GroupInput,
    ball: &WordBall,
    max_trace: i64,
) -> Result<Vec<TraceShell>, DomainError> {
    match group.lattice {
        Lattice::Modular | Lattice::Bianchi => (3..=max_trace)
            .map(|t| shell_solutions(&group.desc, t, group.lattice))
            .collect(),
        Lattice::Orbit => {
            let mut by_trace: BTreeMap<Rat, Vec<HypPoint>> = BTreeMap::new();
            for (p, _) in ball.orbit_points() {
                let t = trace_of(p);
                if t > int(2) && t <= int(max_trace) {
                    by_trace.entry(t).or_default().push(p.clone());
                }
            }
            Ok(by_trace
                .into_iter()
                .map(|(t, mut points)| {
                    points.sort_by(|p, q| (p.x(), p.y(), p.zp()).cmp(&(q.x(), q.y(), q.zp())));
                    TraceShell { t, points }
                })
                .collect())
        }
    }
}

/// Scans shells of increasing trace up to `max_trace` and intersects the
/// resulting Dirichlet half-spaces.
pub fn compute_domain(
    group: &GroupInput,
    max_trace: i64,
    bfs_depth: usize,
) -> Result<DomainReport, DomainError> {
    group.validate()?;
    if max_trace < 3 {
        return Err(DomainError::TraceTooSmall(max_trace));
    }
    let desc = &group.desc;
    let dim = group.dim;
    let origin = HypPoint::origin(desc, dim);
    let ball = WordBall::new(desc, &group.generators, bfs_depth, dim)?;
    let shells = shells(group, &ball, max_trace)?;
    let oracle = MembershipOracle::new(group, ball);
    let mut state = DomainState::new(desc, dim);
    let mut ledger = alloc::vec![ShellEntry {
        trace: int(2),
        point: origin.clone(),
        slope: None,
        verdict: MemberVerdict::Admitted,
        orbit: Some(GroupElem::identity(desc)),
        action: EntryAction::Centre,
    }];
    let mut history = Vec::new();
    let mut undecided = Vec::new();
    for shell in &shells {
        let verdicts = match group.lattice {
            Lattice::Orbit => shell
                .points
                .iter()
                .map(|p| (p.clone(), MemberVerdict::Admitted))
                .collect(),
            _ => filter_group_points(shell, &oracle)?,
        };
        for (p, verdict) in verdicts {
            let slope = slope_key(&p)?;
            let orbit = oracle.ball().factor(&p).cloned();
            let contribution = match (&orbit, &verdict) {
                (Some(delta), _) => Some((delta.clone(), p.clone(), Provenance::Orbit)),
                (None, MemberVerdict::Admitted) => {
                    let g = GroupElem::new(p.to_quat())?;
                    let witness = act(&g, &origin)?;
                    Some((g, witness, Provenance::Midpoint))
                }
                (None, MemberVerdict::Undecided) => {
                    undecided.push(p.clone());
                    None
                }
                (None, MemberVerdict::Rejected(_)) => None,
            };
            let action = match contribution {
                None => EntryAction::Excluded,
                Some((g, witness, provenance)) => match state.slope_trace(&slope) {
                    Some(t) if *t < shell.t => EntryAction::SlopeSeen(t.clone()),
                    _ => {
                        state.register_slope(slope.clone(), shell.t.clone());
                        EntryAction::Added(state.add_halfspace(&g, &witness, provenance, &p)?)
                    }
                },
            };
            ledger.push(ShellEntry {
                trace: shell.t.clone(),
                point: p,
                slope: Some(slope),
                verdict,
                orbit,
                action,
            });
        }
        history.push(Snapshot {
            trace: shell.t.clone(),
            constraint_count: state.polytope().constraints().len(),
            vertices: state
                .polytope()
                .vertices()
                .iter()
                .map(|v| v.point.clone())
                .collect(),
        });
    }
    let pairings = state.side_pairings()?;
    let topology = state.topology(&pairings)?;
    Ok(DomainReport {
        group_name: group.name.clone(),
        max_trace,
        bfs_depth,
        stabilizer: oracle.ball().stabilizer().to_vec(),
        ball_size: oracle.ball().len(),
        state,
        ledger,
        history,
        undecided,
        pairings,
        topology,
    })
}
