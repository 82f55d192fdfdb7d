//! Command-line driver.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use macfarlane_core::dirichlet::{compute_domain, DomainReport, GroupInput, Membership};
use macfarlane_core::exactnum::{int, parse_rat};
use macfarlane_core::hypmodel::{from_klein, from_uhs};
use macfarlane_core::quatalg::{
    is_macfarlane, ramification_set_rational, FieldSpec, MacfarlaneVerdict,
};
use macfarlane_core::{KleinPoint, QuadNum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliError;
use crate::format::{
    dim_from, CheckInput, CheckOutput, ConvertInput, ConvertOutput, DescJson, DomainJson,
    GroupJson, MembershipJson, ModelPoint, OrbitJson,
};
use crate::svg::{render, RenderOptions};
use crate::text;

pub const DEFAULT_MAX_TRACE: i64 = 18;
pub const DEFAULT_BFS_DEPTH: usize = 6;

/// Exit status for runs that finished but left points undecided.
pub const EXIT_UNDECIDED: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "macfarlane",
    version,
    about = "Exact quaternion hyperboloid models and Dirichlet domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Check,
    Convert,
    Orbit,
    Domain,
    Render,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether (a, b / Q(sqrt(-d))) is Macfarlane and normalize it.
    Check(RunConfig),
    /// Map a point between the hyperboloid, upper half-space and Klein models.
    Convert(RunConfig),
    /// List lattice points by trace with their slopes, matrices and images.
    Orbit(RunConfig),
    /// Compute a Dirichlet domain centred at 1.
    Domain(RunConfig),
    /// Draw a domain previously written by `domain --format json`.
    Render(RunConfig),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Svg,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Input JSON file, or `-` for standard input.
    pub input: PathBuf,
    /// Largest trace to scan; defaults to the input's value or 18.
    #[arg(long)]
    pub max_trace: Option<i64>,
    /// Word length for the orbit search; defaults to the input's value or 6.
    #[arg(long)]
    pub bfs_depth: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Decimal digits in SVG coordinates.
    #[arg(long, default_value_t = 3)]
    pub precision: usize,
    /// Fail unless no nontrivial element found by the word search fixes the centre.
    #[arg(long)]
    pub center_check: bool,
    /// Write the result here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Result text and an optional warning that turns into exit status 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub warning: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            warning: None,
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    Ok(serde_json::from_str(text)?)
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn check(input: &CheckInput) -> Result<(CheckOutput, bool), CliError> {
    let m = -input.d;
    let field = FieldSpec { m };
    field.imaginary_d()?;
    let a = QuadNum::parse(&input.a, Some(m))?;
    let b = QuadNum::parse(&input.b, Some(m))?;
    Ok(match is_macfarlane(field, &a, &b)? {
        MacfarlaneVerdict::Yes(n) => {
            let ram = ramification_set_rational(n.desc.a(), n.desc.b())?;
            let out = CheckOutput {
                verdict: "yes".into(),
                normalized: Some(DescJson::from_desc(&n.desc)),
                scale_i: Some(n.scale_i.to_string()),
                scale_j: Some(n.scale_j.to_string()),
                ramification: Some(ram.iter().map(ToString::to_string).collect()),
            };
            (out, true)
        }
        MacfarlaneVerdict::Undecided => {
            let out = CheckOutput {
                verdict: "undecided".into(),
                normalized: None,
                scale_i: None,
                scale_j: None,
                ramification: None,
            };
            (out, false)
        }
    })
}

pub fn convert(input: &ConvertInput) -> Result<ConvertOutput, CliError> {
    let desc = input.desc.to_desc()?;
    let dim = dim_from(input.dim)?;
    let p = match &input.point {
        ModelPoint::Hyperboloid(p) => p.to_point(&desc, dim)?,
        ModelPoint::Uhs(u) => from_uhs(&u.to_uhs(&desc)?, &desc, dim)?,
        ModelPoint::Klein(k) => {
            if k.len() != dim.rank() {
                return Err(CliError::Parse(format!(
                    "expected {} Klein coordinates",
                    dim.rank()
                )));
            }
            let mut coords = [int(0), int(0), int(0)];
            for (slot, s) in coords.iter_mut().zip(k) {
                *slot = parse_rat(s)?;
            }
            from_klein(&KleinPoint { k: coords }, &desc, dim)?
        }
    };
    ConvertOutput::from_point(&p)
}

/// Trace and word-depth bounds: flags first, then the input file, then defaults.
pub fn bounds(group: &GroupJson, cfg_max: Option<i64>, cfg_depth: Option<usize>) -> (i64, usize) {
    let max_trace = cfg_max.or(group.max_trace).unwrap_or(DEFAULT_MAX_TRACE);
    let depth = cfg_depth
        .or(group.bfs_depth)
        .unwrap_or(match group.membership {
            MembershipJson::WordBfs { depth } => depth,
            _ => DEFAULT_BFS_DEPTH,
        });
    (max_trace, depth)
}

/// Runs the domain engine; with word-search membership the flag depth
/// overrides the depth stored in the input.
pub fn run_group(
    group: &GroupJson,
    max_trace: i64,
    depth: usize,
) -> Result<DomainReport, CliError> {
    let mut input: GroupInput = group.to_input()?;
    if let Membership::WordBfs { .. } = input.membership {
        input.membership = Membership::WordBfs { depth };
    }
    if max_trace < 3 {
        return Err(CliError::Precondition(format!(
            "max trace must be at least 3, got {max_trace}"
        )));
    }
    Ok(compute_domain(&input, max_trace, depth)?)
}

fn undecided_warning(n: usize) -> Option<String> {
    (n > 0).then(|| format!("{n} lattice points have undecided membership and were excluded"))
}

pub fn execute(kind: CommandKind, cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.precision == 0 {
        return Err(CliError::Precondition(
            "precision must be at least 1".into(),
        ));
    }
    let raw = read_input(&cfg.input)?;
    let format = cfg.format;
    let reject = |f: OutputFormat| {
        CliError::Precondition(format!("format {f:?} is not available here").to_lowercase())
    };
    match kind {
        CommandKind::Check => {
            let (out, decided) = check(&parse(&raw)?)?;
            let text = match format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => to_json(&out)?,
                OutputFormat::Table => check_table(&out),
                f => return Err(reject(f)),
            };
            let warning =
                (!decided).then(|| "structure constants are not real; no decision".to_string());
            Ok(Outcome { text, warning })
        }
        CommandKind::Convert => {
            let out = convert(&parse(&raw)?)?;
            Ok(Outcome::ok(match format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => to_json(&out)?,
                OutputFormat::Table => format!(
                    "{}\n{}\n[{}]\n",
                    out.quaternion,
                    out.uhs_text,
                    out.klein.join(", ")
                ),
                f => return Err(reject(f)),
            }))
        }
        CommandKind::Orbit => {
            let group: GroupJson = parse(&raw)?;
            let (max_trace, depth) = bounds(&group, cfg.max_trace, cfg.bfs_depth);
            let report = run_group(&group, max_trace, depth)?;
            let orbit = OrbitJson::from_report(&report)?;
            let text = match format.unwrap_or(OutputFormat::Table) {
                OutputFormat::Json => to_json(&orbit)?,
                OutputFormat::Table => text::orbit_table(&orbit),
                f => return Err(reject(f)),
            };
            Ok(Outcome {
                text,
                warning: undecided_warning(orbit.undecided.len()),
            })
        }
        CommandKind::Domain => {
            let group: GroupJson = parse(&raw)?;
            let (max_trace, depth) = bounds(&group, cfg.max_trace, cfg.bfs_depth);
            let report = run_group(&group, max_trace, depth)?;
            if cfg.center_check && !report.stabilizer.is_empty() {
                return Err(CliError::Precondition(format!(
                    "{} nontrivial elements fix the centre; the domain is not a fundamental domain",
                    report.stabilizer.len()
                )));
            }
            let dom = DomainJson::from_report(&report)?;
            let text = match format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => to_json(&dom)?,
                OutputFormat::Svg => render(&dom, &options(cfg))?,
                OutputFormat::Table => text::domain_table(&dom),
            };
            Ok(Outcome {
                text,
                warning: undecided_warning(dom.undecided.len()),
            })
        }
        CommandKind::Render => {
            let dom: DomainJson = parse(&raw)?;
            match format.unwrap_or(OutputFormat::Svg) {
                OutputFormat::Svg => Ok(Outcome::ok(render(&dom, &options(cfg))?)),
                f => Err(reject(f)),
            }
        }
    }
}

fn options(cfg: &RunConfig) -> RenderOptions {
    RenderOptions {
        precision: cfg.precision,
        ..RenderOptions::default()
    }
}

fn check_table(out: &CheckOutput) -> String {
    let mut s = format!("macfarlane: {}\n", out.verdict);
    if let Some(d) = &out.normalized {
        s.push_str(&format!(
            "normalized: ({}, {} / Q(sqrt(-{})))\n",
            d.a, d.b, d.d
        ));
    }
    if let (Some(i), Some(j)) = (&out.scale_i, &out.scale_j) {
        s.push_str(&format!("i' = {i} i, j' = {j} j\n"));
    }
    if let Some(r) = &out.ramification {
        let places = if r.is_empty() {
            "none".to_string()
        } else {
            r.join(", ")
        };
        s.push_str(&format!("ramified over Q at: {places}\n"));
    }
    s
}

/// Parses `args`, runs the command and writes the result; returns the exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (kind, cfg) = match &cli.command {
        Command::Check(c) => (CommandKind::Check, c),
        Command::Convert(c) => (CommandKind::Convert, c),
        Command::Orbit(c) => (CommandKind::Orbit, c),
        Command::Domain(c) => (CommandKind::Domain, c),
        Command::Render(c) => (CommandKind::Render, c),
    };
    let outcome = match execute(kind, cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cfg.output {
        Some(path) => fs::write(path, &outcome.text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => io::stdout()
            .write_all(outcome.text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match outcome.warning {
        Some(w) => {
            eprintln!("warning: {w}");
            EXIT_UNDECIDED
        }
        None => 0,
    }
}
