//! JSON file formats. Every number is written as an exact string: rationals
//! as `p/q`, field elements as `p/q+r/s*sqrt(m)`, real radicals as sums of
//! `c*sqrt(n)` terms.

use macfarlane_core::dirichlet::{
    AmbientPredicate, DomainReport, EntryAction, GroupInput, HalfspaceStatus, Lattice,
    MemberVerdict, Membership, Provenance, ShellEntry,
};
use macfarlane_core::exactnum::{format_rat, parse_rat};
use macfarlane_core::hypmodel::{to_klein, to_uhs};
use macfarlane_core::quatalg::{from_matrix, to_matrix};
use macfarlane_core::{
    AlgebraDesc, Dim, GroupElem, HypPoint, Mat2, QuadNum, Quat, Rat, Surd, UhsPoint,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::text;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescJson {
    pub d: i64,
    pub a: String,
    pub b: String,
}

impl DescJson {
    pub fn from_desc(desc: &AlgebraDesc) -> Self {
        DescJson {
            d: desc.d(),
            a: format_rat(desc.a()),
            b: format_rat(desc.b()),
        }
    }

    pub fn to_desc(&self) -> Result<AlgebraDesc, CliError> {
        Ok(AlgebraDesc::new(
            self.d,
            parse_rat(&self.a)?,
            parse_rat(&self.b)?,
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatJson {
    pub w: String,
    pub x: String,
    pub y: String,
    pub z: String,
}

impl QuatJson {
    pub fn from_quat(q: &Quat) -> Self {
        let [w, x, y, z] = q.coords().map(ToString::to_string);
        QuatJson { w, x, y, z }
    }

    pub fn to_quat(&self, desc: &AlgebraDesc) -> Result<Quat, CliError> {
        let m = Some(desc.m());
        let p = |s: &str| QuadNum::parse(s, m);
        Ok(Quat::new(
            p(&self.w)?,
            p(&self.x)?,
            p(&self.y)?,
            p(&self.z)?,
            desc,
        )?)
    }
}

/// Hyperboloid point `w + x i + y j + z' sqrt(-d) ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub w: String,
    pub x: String,
    pub y: String,
    pub zp: String,
}

impl PointJson {
    pub fn from_point(p: &HypPoint) -> Self {
        let [w, x, y, zp] = p.coords().map(format_rat);
        PointJson { w, x, y, zp }
    }

    pub fn to_point(&self, desc: &AlgebraDesc, dim: Dim) -> Result<HypPoint, CliError> {
        let p = |s: &str| parse_rat(s);
        Ok(HypPoint::new(
            desc,
            dim,
            p(&self.w)?,
            p(&self.x)?,
            p(&self.y)?,
            p(&self.zp)?,
        )?)
    }
}

/// Upper half-space point `u + v I + h J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UhsJson {
    pub u: String,
    pub v: String,
    pub h: String,
}

impl UhsJson {
    pub fn from_uhs(p: &UhsPoint) -> Self {
        UhsJson {
            u: p.u.to_string(),
            v: p.v.to_string(),
            h: p.h.to_string(),
        }
    }

    pub fn to_uhs(&self, desc: &AlgebraDesc) -> Result<UhsPoint, CliError> {
        let m = desc.m();
        let p = |s: &str| Surd::parse_real(s, m);
        Ok(UhsPoint::new(p(&self.u)?, p(&self.v)?, p(&self.h)?)?)
    }
}

pub fn dim_from(n: u8) -> Result<Dim, CliError> {
    match n {
        2 => Ok(Dim::Two),
        3 => Ok(Dim::Three),
        _ => Err(CliError::Parse(format!("dim must be 2 or 3, got {n}"))),
    }
}

pub fn dim_number(dim: Dim) -> u8 {
    match dim {
        Dim::Two => 2,
        Dim::Three => 3,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorJson {
    Quaternion(QuatJson),
    /// Rows of a determinant-one matrix in the image of the embedding.
    Matrix([[String; 2]; 2]),
}

impl GeneratorJson {
    pub fn to_elem(&self, desc: &AlgebraDesc) -> Result<GroupElem, CliError> {
        let q = match self {
            GeneratorJson::Quaternion(q) => q.to_quat(desc)?,
            GeneratorJson::Matrix(rows) => {
                let m = Some(desc.m());
                let p = |s: &str| QuadNum::parse(s, m);
                let mat = Mat2::from_quads(
                    p(&rows[0][0])?,
                    p(&rows[0][1])?,
                    p(&rows[1][0])?,
                    p(&rows[1][1])?,
                );
                from_matrix(&mat, desc)?
            }
        };
        Ok(GroupElem::new(q)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmbientJson {
    #[serde(rename = "psl2z-nonelliptic")]
    Psl2zNonElliptic,
    #[serde(rename = "bianchi")]
    Bianchi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipJson {
    Ambient(AmbientJson),
    WordBfs { depth: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeJson {
    Modular,
    Bianchi,
    Orbit,
}

/// Group input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub name: String,
    pub desc: DescJson,
    pub dim: u8,
    pub generators: Vec<GeneratorJson>,
    pub membership: MembershipJson,
    pub lattice: LatticeJson,
    #[serde(default)]
    pub conj_closed: bool,
    /// Defaults for the command-line bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_trace: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bfs_depth: Option<usize>,
}

impl GroupJson {
    pub fn to_input(&self) -> Result<GroupInput, CliError> {
        let desc = self.desc.to_desc()?;
        let generators = self
            .generators
            .iter()
            .map(|g| g.to_elem(&desc))
            .collect::<Result<Vec<_>, _>>()?;
        let membership = match self.membership {
            MembershipJson::Ambient(AmbientJson::Psl2zNonElliptic) => {
                Membership::Ambient(AmbientPredicate::Psl2zNonElliptic)
            }
            MembershipJson::Ambient(AmbientJson::Bianchi) => {
                Membership::Ambient(AmbientPredicate::Bianchi)
            }
            MembershipJson::WordBfs { depth } => Membership::WordBfs { depth },
        };
        let lattice = match self.lattice {
            LatticeJson::Modular => Lattice::Modular,
            LatticeJson::Bianchi => Lattice::Bianchi,
            LatticeJson::Orbit => Lattice::Orbit,
        };
        let input = GroupInput {
            name: self.name.clone(),
            desc,
            dim: dim_from(self.dim)?,
            generators,
            membership,
            lattice,
            conj_closed: self.conj_closed,
        };
        input.validate()?;
        Ok(input)
    }
}

/// One row of the trace ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub trace: String,
    pub point: PointJson,
    pub text: String,
    /// Primitive integer direction of the pure part, absent for the centre.
    pub slope: Option<Vec<String>>,
    pub matrix: [[String; 2]; 2],
    pub uhs: UhsJson,
    pub uhs_text: String,
    /// `admitted`, `rejected`, `rejected mod q` or `undecided`.
    pub membership: String,
    /// `delta` with `delta delta^dagger` equal to the point, when it is an orbit point.
    pub orbit: Option<QuatJson>,
    /// `centre`, `side N`, `slope seen at t` or `excluded`.
    pub action: String,
}

impl LedgerRow {
    pub fn from_entry(e: &ShellEntry) -> Result<Self, CliError> {
        let mat = to_matrix(&e.point.to_quat())?;
        let cell = |s: &Surd| s.to_string();
        let uhs = to_uhs(&e.point)?;
        Ok(LedgerRow {
            trace: format_rat(&e.trace),
            point: PointJson::from_point(&e.point),
            text: text::point_text(&e.point),
            slope: e.slope.as_ref().map(|s| {
                s.0.iter()
                    .take(e.point.dim().rank())
                    .map(ToString::to_string)
                    .collect()
            }),
            matrix: [
                [cell(&mat.e[0][0]), cell(&mat.e[0][1])],
                [cell(&mat.e[1][0]), cell(&mat.e[1][1])],
            ],
            uhs_text: text::uhs_text(&uhs),
            uhs: UhsJson::from_uhs(&uhs),
            membership: verdict_text(&e.verdict),
            orbit: e.orbit.as_ref().map(|g| QuatJson::from_quat(g.quat())),
            action: match &e.action {
                EntryAction::Centre => "centre".into(),
                EntryAction::Added(i) => format!("side {i}"),
                EntryAction::SlopeSeen(t) => format!("slope seen at {t}"),
                EntryAction::Excluded => "excluded".into(),
            },
        })
    }
}

fn verdict_text(v: &MemberVerdict) -> String {
    match v {
        MemberVerdict::Admitted => "admitted".into(),
        MemberVerdict::Rejected(None) => "rejected".into(),
        MemberVerdict::Rejected(Some(q)) => format!("rejected mod {q}"),
        MemberVerdict::Undecided => "undecided".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub group: String,
    pub desc: DescJson,
    pub dim: u8,
    pub max_trace: i64,
    pub bfs_depth: usize,
    pub rows: Vec<LedgerRow>,
    pub undecided: Vec<PointJson>,
}

impl OrbitJson {
    pub fn from_report(r: &DomainReport) -> Result<Self, CliError> {
        Ok(OrbitJson {
            group: r.group_name.clone(),
            desc: DescJson::from_desc(r.state.desc()),
            dim: dim_number(r.state.dim()),
            max_trace: r.max_trace,
            bfs_depth: r.bfs_depth,
            rows: r
                .ledger
                .iter()
                .map(LedgerRow::from_entry)
                .collect::<Result<_, _>>()?,
            undecided: r.undecided.iter().map(PointJson::from_point).collect(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusJson {
    Side,
    Redundant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceJson {
    Orbit,
    Midpoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub status: StatusJson,
    pub provenance: ProvenanceJson,
    pub found_at: String,
    pub source: PointJson,
    pub witness: PointJson,
    pub contributor: QuatJson,
    /// Klein-coordinate half-space `normal . k <= offset`.
    pub normal: Vec<String>,
    pub offset: String,
    /// Index among the polytope constraints; the bounding box comes first.
    pub constraint: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    /// Klein coordinates.
    pub point: Vec<String>,
    /// Polytope constraints through the vertex.
    pub tight: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingJson {
    pub side: usize,
    pub partner: Option<usize>,
    pub geometric_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyJson {
    pub sides: usize,
    pub side_pairs: usize,
    pub ideal_cycles: usize,
    pub finite_cycles: usize,
    pub genus: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotJson {
    pub trace: String,
    pub constraints: usize,
    pub vertices: usize,
}

/// Everything `render` needs, plus the diagnostics of the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainJson {
    pub group: String,
    pub desc: DescJson,
    pub dim: u8,
    pub max_trace: i64,
    pub bfs_depth: usize,
    pub ball_size: usize,
    pub complete: bool,
    pub bounded: bool,
    pub centre_inside: bool,
    pub monotone: bool,
    pub box_constraints: usize,
    pub halfspaces: Vec<HalfspaceJson>,
    pub vertices: Vec<VertexJson>,
    pub pairings: Vec<PairingJson>,
    pub topology: Option<TopologyJson>,
    pub undecided: Vec<PointJson>,
    pub stabilizer: Vec<QuatJson>,
    pub history: Vec<SnapshotJson>,
    pub ledger: Vec<LedgerRow>,
}

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

impl DomainJson {
    pub fn from_report(r: &DomainReport) -> Result<Self, CliError> {
        let st = &r.state;
        let poly = st.polytope();
        let halfspaces = st
            .halfspaces()
            .iter()
            .map(|h| HalfspaceJson {
                status: match h.status {
                    HalfspaceStatus::Side => StatusJson::Side,
                    HalfspaceStatus::Redundant => StatusJson::Redundant,
                },
                provenance: match h.provenance {
                    Provenance::Orbit => ProvenanceJson::Orbit,
                    Provenance::Midpoint => ProvenanceJson::Midpoint,
                },
                found_at: format_rat(&h.found_at),
                source: PointJson::from_point(&h.source),
                witness: PointJson::from_point(&h.witness),
                contributor: QuatJson::from_quat(h.contributor.quat()),
                normal: rats(&h.constraint.normal),
                offset: format_rat(&h.constraint.offset),
                constraint: h.poly_index,
            })
            .collect();
        let vertices = poly
            .vertices()
            .iter()
            .map(|v| VertexJson {
                point: rats(&v.point),
                tight: v.tight.iter().copied().collect(),
            })
            .collect();
        Ok(DomainJson {
            group: r.group_name.clone(),
            desc: DescJson::from_desc(st.desc()),
            dim: dim_number(st.dim()),
            max_trace: r.max_trace,
            bfs_depth: r.bfs_depth,
            ball_size: r.ball_size,
            complete: r.is_complete(),
            bounded: st.is_bounded(),
            centre_inside: st.contains_centre_strictly(),
            monotone: r.monotone_truncation(),
            box_constraints: poly.box_count(),
            halfspaces,
            vertices,
            pairings: r
                .pairings
                .iter()
                .map(|p| PairingJson {
                    side: p.side,
                    partner: p.partner,
                    geometric_match: p.geometric_match,
                })
                .collect(),
            topology: r.topology.as_ref().map(|t| TopologyJson {
                sides: t.sides,
                side_pairs: t.side_pairs,
                ideal_cycles: t.ideal_cycles,
                finite_cycles: t.finite_cycles,
                genus: t.genus,
            }),
            undecided: r.undecided.iter().map(PointJson::from_point).collect(),
            stabilizer: r
                .stabilizer
                .iter()
                .map(|g| QuatJson::from_quat(g.quat()))
                .collect(),
            history: r
                .history
                .iter()
                .map(|s| SnapshotJson {
                    trace: format_rat(&s.trace),
                    constraints: s.constraint_count,
                    vertices: s.vertices.len(),
                })
                .collect(),
            ledger: r
                .ledger
                .iter()
                .map(LedgerRow::from_entry)
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn side_count(&self) -> usize {
        self.halfspaces
            .iter()
            .filter(|h| h.status == StatusJson::Side)
            .count()
    }
}

/// Input of `convert`: one point in any of the three models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvertInput {
    pub desc: DescJson,
    pub dim: u8,
    pub point: ModelPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelPoint {
    Hyperboloid(PointJson),
    Uhs(UhsJson),
    Klein(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvertOutput {
    pub hyperboloid: PointJson,
    pub quaternion: String,
    pub uhs: UhsJson,
    pub uhs_text: String,
    pub klein: Vec<String>,
}

impl ConvertOutput {
    pub fn from_point(p: &HypPoint) -> Result<Self, CliError> {
        let uhs = to_uhs(p)?;
        let k = to_klein(p);
        Ok(ConvertOutput {
            hyperboloid: PointJson::from_point(p),
            quaternion: text::point_text(p),
            uhs_text: text::uhs_text(&uhs),
            uhs: UhsJson::from_uhs(&uhs),
            klein: rats(&k.k[..p.dim().rank()]),
        })
    }
}

/// Input of `check`: `K = Q(sqrt(-d))` and the structure constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckInput {
    pub d: i64,
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutput {
    /// `yes` or `undecided`.
    pub verdict: String,
    pub normalized: Option<DescJson>,
    pub scale_i: Option<String>,
    pub scale_j: Option<String>,
    /// Places of `Q` where `(a, b / Q)` ramifies, when the constants are rational.
    pub ramification: Option<Vec<String>>,
}
