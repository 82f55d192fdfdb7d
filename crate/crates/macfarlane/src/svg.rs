//! SVG pictures of computed domains. Exact data is converted to floating
//! point only here, for drawing.
//!
//! Planar domains are drawn in the upper half-plane: each side is the
//! geodesic arc (or vertical segment) between the images of its end
//! vertices, labelled with the trace at which it was found, and paired sides
//! are joined by arrows. Spatial domains are drawn as seen from above the
//! upper half-space: every edge of every side is sampled along its geodesic
//! and projected to the `(u, v)` plane, and each side is labelled with its
//! trace.

use std::collections::BTreeSet;
use std::fmt::Write;

use macfarlane_core::exactnum::parse_rat;
use num_traits::ToPrimitive;

use crate::error::CliError;
use crate::format::{DomainJson, StatusJson};

#[derive(Clone, Copy, Debug)]
pub struct RenderOptions {
    /// Decimal digits in coordinates.
    pub precision: usize,
    pub width: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            precision: 3,
            width: 800.0,
        }
    }
}

const MARGIN: f64 = 40.0;
const EDGE_SAMPLES: usize = 48;
const EPS: f64 = 1e-9;

struct Model {
    q: [f64; 3],
    sa: f64,
    sb: f64,
    sabd: f64,
}

impl Model {
    fn new(d: &DomainJson) -> Result<Self, CliError> {
        let a = float(&d.desc.a)?;
        let b = float(&d.desc.b)?;
        let abd = a * b * d.desc.d as f64;
        if a <= 0.0 || b <= 0.0 {
            return Err(CliError::Precondition(
                "rendering needs positive structure constants".into(),
            ));
        }
        let q = if d.dim == 2 { [a, b, 0.0] } else { [a, b, abd] };
        Ok(Model {
            q,
            sa: a.sqrt(),
            sb: b.sqrt(),
            sabd: abd.sqrt(),
        })
    }

    fn form(&self, k: &[f64; 3]) -> f64 {
        self.q.iter().zip(k).map(|(q, x)| q * x * x).sum()
    }

    /// Upper half-space image `(u, v, h)`, or `None` at the point at infinity.
    fn uhs(&self, k: &[f64; 3]) -> Option<[f64; 3]> {
        let den = 1.0 + k[0] * self.sa;
        if den < EPS {
            return None;
        }
        let rest = (1.0 - self.form(k)).max(0.0);
        Some([
            k[1] * self.sb / den,
            -k[2] * self.sabd / den,
            rest.sqrt() / den,
        ])
    }

    /// Part of the Klein segment `p0 p1` inside the closed ellipsoid, as
    /// parameters `t0 <= t1` in `[0, 1]`.
    fn clip(&self, p0: &[f64; 3], p1: &[f64; 3]) -> Option<(f64, f64)> {
        let dir = [p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]];
        let qa: f64 = (0..3).map(|i| self.q[i] * dir[i] * dir[i]).sum();
        let qb: f64 = (0..3).map(|i| 2.0 * self.q[i] * dir[i] * p0[i]).sum();
        let qc = self.form(p0) - 1.0;
        if qa < EPS {
            return (qc <= EPS).then_some((0.0, 1.0));
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        let r = disc.sqrt();
        let t0 = ((-qb - r) / (2.0 * qa)).max(0.0);
        let t1 = ((-qb + r) / (2.0 * qa)).min(1.0);
        (t0 <= t1).then_some((t0, t1))
    }
}

fn float(s: &str) -> Result<f64, CliError> {
    let r = parse_rat(s)?;
    r.to_f64()
        .ok_or_else(|| CliError::Precondition(format!("{s} is out of floating-point range")))
}

fn lerp(p0: &[f64; 3], p1: &[f64; 3], t: f64) -> [f64; 3] {
    [
        p0[0] + t * (p1[0] - p0[0]),
        p0[1] + t * (p1[1] - p0[1]),
        p0[2] + t * (p1[2] - p0[2]),
    ]
}

struct Side {
    index: usize,
    trace: String,
    vertices: Vec<usize>,
}

fn sides(d: &DomainJson) -> Vec<Side> {
    d.halfspaces
        .iter()
        .enumerate()
        .filter(|(_, h)| h.status == StatusJson::Side)
        .filter_map(|(index, h)| {
            let c = h.constraint?;
            let vertices = d
                .vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| v.tight.contains(&c))
                .map(|(i, _)| i)
                .collect();
            Some(Side {
                index,
                trace: h.found_at.clone(),
                vertices,
            })
        })
        .collect()
}

/// World-to-screen map with `y` pointing up in world coordinates.
struct Frame {
    x0: f64,
    y_top: f64,
    scale: f64,
    width: f64,
    height: f64,
    prec: usize,
}

impl Frame {
    fn new(xs: (f64, f64), ys: (f64, f64), opts: &RenderOptions) -> Self {
        let span_x = (xs.1 - xs.0).max(EPS);
        let span_y = (ys.1 - ys.0).max(EPS);
        let scale = (opts.width - 2.0 * MARGIN) / span_x;
        Frame {
            x0: xs.0,
            y_top: ys.1,
            scale,
            width: opts.width,
            height: span_y * scale + 2.0 * MARGIN,
            prec: opts.precision,
        }
    }

    fn num(&self, v: f64) -> String {
        let s = format!("{:.*}", self.prec, v);
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }

    fn x(&self, u: f64) -> String {
        self.num(MARGIN + (u - self.x0) * self.scale)
    }

    fn y(&self, h: f64) -> String {
        self.num(MARGIN + (self.y_top - h) * self.scale)
    }

    fn pt(&self, u: f64, h: f64) -> String {
        format!("{},{}", self.x(u), self.y(h))
    }

    fn header(&self, title: &str) -> String {
        let (w, h) = (self.num(self.width), self.num(self.height));
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(out, "<title>{}</title>", escape(title));
        let _ = writeln!(
            out,
            concat!(
                r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" "#,
                r##"orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="#c0392b"/></marker>"##,
                r#"<clipPath id="frame"><rect x="0" y="0" width="{}" height="{}"/></clipPath></defs>"#
            ),
            w, h
        );
        let _ = writeln!(
            out,
            r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#
        );
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders a domain; fails when it has no sides.
pub fn render(d: &DomainJson, opts: &RenderOptions) -> Result<String, CliError> {
    if opts.precision == 0 {
        return Err(CliError::Precondition(
            "precision must be at least 1".into(),
        ));
    }
    let sides = sides(d);
    if sides.is_empty() {
        return Err(CliError::Precondition(
            "domain has no sides to render".into(),
        ));
    }
    let model = Model::new(d)?;
    let verts = d
        .vertices
        .iter()
        .map(|v| {
            let mut k = [0.0; 3];
            for (slot, s) in k.iter_mut().zip(&v.point) {
                *slot = float(s)?;
            }
            Ok(k)
        })
        .collect::<Result<Vec<[f64; 3]>, CliError>>()?;
    match d.dim {
        2 => Ok(render_plane(d, &sides, &verts, &model, opts)),
        _ => Ok(render_space(d, &sides, &verts, &model, opts)),
    }
}

/// A side drawn in the half-plane: end points (`None` at infinity) and a
/// point in the middle for labels.
struct Arc {
    ends: [Option<[f64; 2]>; 2],
    mid: [f64; 2],
}

fn plane_arc(side: &Side, verts: &[[f64; 3]], model: &Model) -> Option<Arc> {
    let [a, b] = [side.vertices.first()?, side.vertices.get(1)?];
    let (p0, p1) = (&verts[*a], &verts[*b]);
    let (t0, t1) = model.clip(p0, p1)?;
    let e0 = lerp(p0, p1, t0);
    let e1 = lerp(p0, p1, t1);
    let m = model.uhs(&lerp(p0, p1, (t0 + t1) / 2.0))?;
    let end = |k: &[f64; 3]| model.uhs(k).map(|p| [p[0], p[2]]);
    Some(Arc {
        ends: [end(&e0), end(&e1)],
        mid: [m[0], m[2]],
    })
}

fn render_plane(
    d: &DomainJson,
    sides: &[Side],
    verts: &[[f64; 3]],
    model: &Model,
    opts: &RenderOptions,
) -> String {
    let arcs: Vec<(usize, &Side, Arc)> = sides
        .iter()
        .filter_map(|s| plane_arc(s, verts, model).map(|a| (s.index, s, a)))
        .collect();
    let mut us = vec![0.0f64];
    let mut hs = vec![1.0f64];
    for (_, _, arc) in &arcs {
        for p in arc.ends.iter().flatten() {
            us.push(p[0]);
            hs.push(p[1]);
        }
        us.push(arc.mid[0]);
        hs.push(arc.mid[1]);
        if let [Some(p), Some(q)] = arc.ends {
            hs.push(circle(p, q).map_or(0.0, |(_, r)| r));
        }
    }
    let (umin, umax) = us
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &u| (lo.min(u), hi.max(u)));
    let hmax = hs.iter().cloned().fold(0.0, f64::max) * 1.15;
    let pad = 0.08 * (umax - umin).max(1.0);
    let frame = Frame::new((umin - pad, umax + pad), (0.0, hmax), opts);
    let mut out = frame.header(&d.group);
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#888" stroke-width="1"/>"##,
        frame.x(umin - pad),
        frame.y(0.0),
        frame.x(umax + pad),
        frame.y(0.0)
    );
    out.push_str(
        "<g clip-path=\"url(#frame)\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"2\">\n",
    );
    for (i, _, arc) in &arcs {
        let _ = writeln!(
            out,
            r#"<path id="side-{i}" d="{}"/>"#,
            arc_path(arc, &frame, hmax)
        );
    }
    out.push_str("</g>\n");
    out.push_str(
        "<g fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1\" stroke-dasharray=\"4 3\">\n",
    );
    for p in &d.pairings {
        let Some(j) = p.partner else { continue };
        if j < p.side {
            continue;
        }
        let find = |k: usize| arcs.iter().find(|(i, _, _)| *i == k).map(|(_, _, a)| a.mid);
        let (Some(m0), Some(m1)) = (find(p.side), find(j)) else {
            continue;
        };
        let lift = 0.25 * ((m1[0] - m0[0]).abs() + (m1[1] - m0[1]).abs());
        let _ = writeln!(
            out,
            r#"<path d="M{} Q{} {}" marker-start="url(#arrow)" marker-end="url(#arrow)"/>"#,
            frame.pt(m0[0], m0[1]),
            frame.pt((m0[0] + m1[0]) / 2.0, (m0[1] + m1[1]) / 2.0 + lift),
            frame.pt(m1[0], m1[1])
        );
    }
    out.push_str("</g>\n");
    labels(
        &mut out,
        d,
        arcs.iter().map(|(i, s, a)| (*i, s.trace.as_str(), a.mid)),
        &frame,
    );
    let _ = writeln!(
        out,
        r##"<circle cx="{}" cy="{}" r="3" fill="#222"/>"##,
        frame.x(0.0),
        frame.y(1.0)
    );
    out.push_str("</svg>\n");
    out
}

/// Centre and radius of the circle through `p`, `q` centred on the real axis.
fn circle(p: [f64; 2], q: [f64; 2]) -> Option<(f64, f64)> {
    let du = q[0] - p[0];
    if du.abs() < EPS {
        return None;
    }
    let c = (q[0] * q[0] + q[1] * q[1] - p[0] * p[0] - p[1] * p[1]) / (2.0 * du);
    Some((c, ((p[0] - c).powi(2) + p[1] * p[1]).sqrt()))
}

fn arc_path(arc: &Arc, frame: &Frame, top: f64) -> String {
    match arc.ends {
        [Some(p), Some(q)] => match circle(p, q) {
            Some((_, r)) => {
                let (l, rt) = if p[0] < q[0] { (p, q) } else { (q, p) };
                let rad = frame.num(r * frame.scale);
                format!(
                    "M{} A{rad},{rad} 0 0,1 {}",
                    frame.pt(l[0], l[1]),
                    frame.pt(rt[0], rt[1])
                )
            }
            None => format!("M{} L{}", frame.pt(p[0], p[1]), frame.pt(q[0], q[1])),
        },
        [Some(p), None] | [None, Some(p)] => {
            format!("M{} L{}", frame.pt(p[0], p[1]), frame.pt(p[0], top))
        }
        [None, None] => String::new(),
    }
}

fn labels<'a>(
    out: &mut String,
    d: &DomainJson,
    items: impl Iterator<Item = (usize, &'a str, [f64; 2])>,
    frame: &Frame,
) {
    out.push_str("<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n");
    for (i, trace, p) in items {
        let unpaired = d
            .pairings
            .iter()
            .any(|q| q.side == i && q.partner.is_none());
        let colour = if unpaired { "#c0392b" } else { "#111" };
        let note = if unpaired { " unpaired" } else { "" };
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{colour}">s{i} t={trace}{note}</text>"#,
            frame.x(p[0]),
            frame.y(p[1])
        );
    }
    out.push_str("</g>\n");
}

fn render_space(
    d: &DomainJson,
    sides: &[Side],
    verts: &[[f64; 3]],
    model: &Model,
    opts: &RenderOptions,
) -> String {
    let mut edges = BTreeSet::new();
    for s in sides {
        for (n, &a) in s.vertices.iter().enumerate() {
            for &b in &s.vertices[n + 1..] {
                let shared = d.vertices[a]
                    .tight
                    .iter()
                    .filter(|c| d.vertices[b].tight.contains(c))
                    .count();
                if shared >= 2 {
                    edges.insert((a, b));
                }
            }
        }
    }
    let mut polylines: Vec<Vec<[f64; 2]>> = Vec::new();
    for &(a, b) in &edges {
        let (p0, p1) = (&verts[a], &verts[b]);
        let Some((t0, t1)) = model.clip(p0, p1) else {
            continue;
        };
        let line: Vec<[f64; 2]> = (0..=EDGE_SAMPLES)
            .filter_map(|n| {
                let t = t0 + (t1 - t0) * n as f64 / EDGE_SAMPLES as f64;
                model.uhs(&lerp(p0, p1, t)).map(|p| [p[0], p[1]])
            })
            .collect();
        if line.len() >= 2 {
            polylines.push(line);
        }
    }
    let mut marks = Vec::new();
    for s in sides {
        let inside: Vec<&[f64; 3]> = s
            .vertices
            .iter()
            .map(|&v| &verts[v])
            .filter(|k| model.form(k) <= 1.0 + EPS)
            .collect();
        if inside.is_empty() {
            continue;
        }
        let n = inside.len() as f64;
        let mut c = [0.0; 3];
        for k in &inside {
            for (acc, x) in c.iter_mut().zip(k.iter()) {
                *acc += x / n;
            }
        }
        // pull the centroid slightly inward so ideal faces still get a label
        let c = c.map(|x| x * 0.98);
        if let Some(p) = model.uhs(&c) {
            marks.push((s.index, s.trace.as_str(), [p[0], p[1]]));
        }
    }
    let finite: Vec<[f64; 2]> = verts
        .iter()
        .filter(|k| model.form(k) <= 1.0 + EPS)
        .filter_map(|k| model.uhs(k).map(|p| [p[0], p[1]]))
        .chain(marks.iter().map(|m| m.2))
        .chain(std::iter::once([0.0, 0.0]))
        .collect();
    let bound = |i: usize| {
        finite.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| {
            (lo.min(p[i]), hi.max(p[i]))
        })
    };
    let (u0, u1) = bound(0);
    let (v0, v1) = bound(1);
    let pad = 0.08 * (u1 - u0).max(v1 - v0).max(1.0);
    let frame = Frame::new((u0 - pad, u1 + pad), (v0 - pad, v1 + pad), opts);
    let mut out = frame.header(&d.group);
    out.push_str(
        "<g clip-path=\"url(#frame)\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.5\">\n",
    );
    for line in &polylines {
        let pts: Vec<String> = line.iter().map(|p| frame.pt(p[0], p[1])).collect();
        let _ = writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" "));
    }
    out.push_str("</g>\n");
    labels(&mut out, d, marks.into_iter(), &frame);
    let _ = writeln!(
        out,
        r##"<circle cx="{}" cy="{}" r="3" fill="#222"/>"##,
        frame.x(0.0),
        frame.y(0.0)
    );
    out.push_str("</svg>\n");
    out
}
