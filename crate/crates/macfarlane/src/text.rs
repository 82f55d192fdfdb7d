//! Human-readable forms: compact algebraic notation and plain-text tables.

use std::fmt::Write;

use macfarlane_core::exactnum::{format_rat, parse_rat};
use macfarlane_core::{HypPoint, Rat, Surd, UhsPoint};
use num_traits::{One, Signed, Zero};

use crate::format::{DomainJson, LedgerRow, OrbitJson, PointJson, StatusJson};

fn push_rat(out: &mut String, r: &Rat, unit: &str) {
    if r.is_zero() {
        return;
    }
    if r.is_negative() {
        out.push('-');
    } else if !out.is_empty() {
        out.push('+');
    }
    let body = format_rat(&r.abs());
    if unit.is_empty() || body != "1" {
        out.push_str(&body);
    }
    out.push_str(unit);
}

/// Drops unit coefficients in front of radicals: `1*sqrt(2)` becomes `sqrt(2)`.
fn tidy(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(pos) = rest.find("1*sqrt") {
        out.push_str(&rest[..pos]);
        let unit_coef = matches!(out.chars().last(), None | Some('+' | '-' | '('));
        out.push_str(if unit_coef { "sqrt" } else { "1*sqrt" });
        rest = &rest[pos + 6..];
    }
    out.push_str(rest);
    out
}

/// `w+xi+yj+z'sqrt(-d)ij`, e.g. `3/2+1/2i+j`.
pub fn point_text(p: &HypPoint) -> String {
    let mut out = String::new();
    push_rat(&mut out, p.w(), "");
    push_rat(&mut out, p.x(), "i");
    push_rat(&mut out, p.y(), "j");
    let ij = format!("sqrt({})ij", p.desc().m());
    push_rat(&mut out, p.zp(), &ij);
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// [`point_text`] for a point read from a file; malformed coordinates are shown verbatim.
fn point_json_text(p: &PointJson, m: i64) -> String {
    let coords = [&p.w, &p.x, &p.y, &p.zp];
    let parsed: Result<Vec<Rat>, _> = coords.iter().map(|c| parse_rat(c)).collect();
    let Ok(r) = parsed else {
        return format!("({}, {}, {}, {})", p.w, p.x, p.y, p.zp);
    };
    let mut out = String::new();
    let ij = format!("sqrt({m})ij");
    for (c, unit) in r.iter().zip(["", "i", "j", ij.as_str()]) {
        push_rat(&mut out, c, unit);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn push_surd(out: &mut String, s: &Surd, unit: &str) {
    if s.is_zero() {
        return;
    }
    match s.as_rat() {
        Some(r) => push_rat(out, &r, unit),
        None => {
            let text = tidy(&s.to_string());
            if !out.is_empty() && !text.starts_with('-') {
                out.push('+');
            }
            if unit.is_empty() {
                out.push_str(&text);
            } else {
                let _ = write!(out, "({text}){unit}");
            }
        }
    }
}

/// `u+vI+hJ`, e.g. `1/2+1/2J` or `J`.
pub fn uhs_text(p: &UhsPoint) -> String {
    let mut out = String::new();
    push_surd(&mut out, &p.u, "");
    push_surd(&mut out, &p.v, "I");
    if p.h.as_rat().is_some_and(|h| h.is_one()) {
        if !out.is_empty() {
            out.push('+');
        }
        out.push('J');
    } else {
        push_surd(&mut out, &p.h, "J");
    }
    out
}

fn layout(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(
        &header.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        &mut out,
    );
    line(
        &widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(),
        &mut out,
    );
    for r in rows {
        line(r, &mut out);
    }
    out
}

fn matrix_cell(m: &[[String; 2]; 2]) -> String {
    format!("({} {}; {} {})", m[0][0], m[0][1], m[1][0], m[1][1])
}

fn ledger_cells(r: &LedgerRow) -> Vec<String> {
    let slope = r
        .slope
        .as_ref()
        .map_or_else(|| "-".to_string(), |s| format!("[{}]", s.join(",")));
    vec![
        r.trace.clone(),
        if r.orbit.is_some() {
            format!("*{}", r.text)
        } else {
            r.text.clone()
        },
        slope,
        matrix_cell(&r.matrix),
        r.uhs_text.clone(),
        r.membership.clone(),
        r.action.clone(),
    ]
}

const LEDGER_HEADER: [&str; 7] = [
    "trace",
    "point",
    "slope",
    "matrix",
    "image",
    "membership",
    "action",
];

/// Ledger table; orbit points are starred.
pub fn orbit_table(o: &OrbitJson) -> String {
    let rows: Vec<_> = o.rows.iter().map(ledger_cells).collect();
    let mut out = format!(
        "{} up to trace {} (word depth {})\n",
        o.group, o.max_trace, o.bfs_depth
    );
    out.push_str(&layout(&LEDGER_HEADER, &rows));
    if !o.undecided.is_empty() {
        let _ = writeln!(out, "{} undecided points excluded", o.undecided.len());
    }
    out
}

pub fn domain_table(d: &DomainJson) -> String {
    let mut out = format!(
        "{} up to trace {} (word depth {}, {} elements)\n",
        d.group, d.max_trace, d.bfs_depth, d.ball_size
    );
    let partner = |i: usize| {
        d.pairings
            .iter()
            .find(|p| p.side == i)
            .map_or("-".to_string(), |p| match p.partner {
                Some(j) if p.geometric_match => j.to_string(),
                Some(j) => format!("{j} (faces differ)"),
                None => "unpaired".into(),
            })
    };
    let rows: Vec<Vec<String>> = d
        .halfspaces
        .iter()
        .enumerate()
        .filter(|(_, h)| h.status == StatusJson::Side)
        .map(|(i, h)| {
            vec![
                i.to_string(),
                h.found_at.clone(),
                format!("{:?}", h.provenance).to_lowercase(),
                point_json_text(&h.witness, -d.desc.d),
                partner(i),
            ]
        })
        .collect();
    out.push_str(&layout(
        &["side", "trace", "from", "witness", "partner"],
        &rows,
    ));
    let _ = writeln!(
        out,
        "sides {}  vertices {}  bounded {}  centre inside {}  monotone {}  complete {}",
        d.side_count(),
        d.vertices.len(),
        d.bounded,
        d.centre_inside,
        d.monotone,
        d.complete
    );
    if let Some(t) = &d.topology {
        let genus = t.genus.map_or("?".to_string(), |g| g.to_string());
        let _ = writeln!(
            out,
            "genus {genus}  punctures {}  finite vertex cycles {}",
            t.ideal_cycles, t.finite_cycles
        );
    }
    if !d.undecided.is_empty() {
        let _ = writeln!(out, "{} undecided points excluded", d.undecided.len());
    }
    out
}
