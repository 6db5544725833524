//! Command dispatch. Every command returns a JSON report; reports only
//! contain canonical data, so they are byte-identical across runs.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use germ_core::descent::{descend, stabilizer_sample, verify_witness, DescentError, DescentProblem};
use germ_core::exactfield::parse_field;
use germ_core::germs::{group_level, Group, GroupElement, MapGerm, MapSpace};
use germ_core::jets::{Filtration, Jet, SubspaceBasis};
use germ_core::polysys::{
    brute_solve, compile_system, groebner_inconsistent, orbit_split, spair_cap, GroebnerOutcome, PolySystem,
    DEFAULT_GROUP_CAP, DEFAULT_SEARCH_CAP,
};
use germ_core::tangent::{artin_rees_bound, exp_vf, log_aut, tangent_space, TangentVector};
use serde_json::{json, Value};
use thiserror::Error;

use crate::session::{parse_session, Named, Object, Session, SessionError, Side};

#[derive(Parser, Debug)]
#[command(name = "germ", version, about = "Exact jet-level computations with map-germs and their equivalence groups")]
pub struct Cli {
    /// Seed for commands that sample randomly.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SessionArg {
    /// Session file; `-` reads standard input.
    #[arg(long, short, default_value = "-")]
    pub session: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArg {
    /// R, L, LR, C, K or Klin.
    #[arg(long, short)]
    pub group: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a session and report its objects (or re-emit it canonically).
    Check {
        #[command(flatten)]
        s: SessionArg,
        /// Print the canonical session text instead of a report.
        #[arg(long)]
        emit: bool,
    },
    /// Apply a group element to a map.
    Act {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        /// Automorphisms, contact maps or vector fields (exponentiated), composed left to right.
        #[arg(long, required = true)]
        elem: Vec<String>,
        #[arg(long)]
        map: String,
    },
    /// Basis of the filtered tangent image `T_{G^(j)} f`.
    Tangent {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[arg(long)]
        filtration: Option<String>,
    },
    /// Filtration level of a group element.
    Level {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, required = true)]
        elem: Vec<String>,
        #[arg(long)]
        filtration: Option<String>,
    },
    /// Exponential of a vector field.
    Exp {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        vf: String,
    },
    /// Logarithm of a group element.
    Log {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, required = true)]
        elem: Vec<String>,
    },
    /// Least `d` with `T_G f ∩ M^d ⊆ T_{G^(j)} f`.
    ArtinRees {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long)]
        filtration: Option<String>,
    },
    /// Descend an equivalence over the extension field to the base field.
    Descend {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        map: String,
        /// The map the witness carries `--map` to.
        #[arg(long)]
        target: String,
        /// The witness over the extension, composed left to right.
        #[arg(long, required = true)]
        elem: Vec<String>,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long)]
        filtration: Option<String>,
    },
    /// A random element of `G^(j)` fixing a map (uses `--seed`).
    Stabilizer {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long)]
        filtration: Option<String>,
    },
    /// Polynomial system for `g·f = target` in the coefficients of `g`.
    System {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        map: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        level: Option<u32>,
        /// Also write the system JSON to this file.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// All solutions of a system over a finite field.
    Solve {
        system: PathBuf,
        /// Defaults to the coefficient field of the system.
        #[arg(long)]
        field: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u64,
    },
    /// Decide solvability over the algebraic closure by a Gröbner basis.
    Groebner {
        system: PathBuf,
        /// S-pair budget; defaults to GERM_SPAIR_CAP or 20000.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Split the rational part of an orbit over the extension into base-field orbits.
    Orbits {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Session { path: String, source: SessionError },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

/// A command's outcome. `negative` marks a mathematical "no" (exit code 2).
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub result: Value,
    pub negative: bool,
}

impl Report {
    fn ok(result: Value) -> Report {
        Report { result, negative: false }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

pub fn load_session(path: &PathBuf) -> Result<Session, CliError> {
    let text = read(path)?;
    parse_session(&text).map_err(|source| CliError::Session {
        path: path.display().to_string(),
        source,
    })
}

fn group(g: &GroupArg) -> Result<Group, CliError> {
    g.group.parse().map_err(|e: germ_core::germs::GermError| CliError::Usage(e.to_string()))
}

fn named<'a>(s: &'a Session, name: &str) -> Result<&'a Named, CliError> {
    s.get(name).ok_or_else(|| CliError::Usage(format!("no object named '{name}'")))
}

fn map<'a>(s: &'a Session, name: &str) -> Result<(&'a Named, &'a MapGerm), CliError> {
    let o = named(s, name)?;
    match &o.object {
        Object::Map(m) => Ok((o, m)),
        other => Err(CliError::Usage(format!("'{name}' is a {}, not a map", other.kind()))),
    }
}

/// A map over the base field, refusing maps defined over the extension.
fn base_map<'a>(s: &'a Session, name: &str) -> Result<&'a MapGerm, CliError> {
    let (o, m) = map(s, name)?;
    if o.over_top {
        return Err(CliError::Usage(format!("map '{name}' must be defined over the base field")));
    }
    Ok(m)
}

fn top_space(s: &Session) -> Result<&MapSpace, CliError> {
    s.space_top.as_ref().ok_or_else(|| CliError::Usage("this command needs an 'extend' stanza".into()))
}

/// `m` over the space `sp` (the base space or its extension).
fn lift(s: &Session, m: &MapGerm, sp: &MapSpace) -> MapGerm {
    if m.space() == sp {
        m.clone()
    } else {
        m.base_change(s.ext.as_ref().expect("two spaces imply an extension"), sp)
    }
}

fn filtration(s: &Session, name: Option<&str>, sp: &MapSpace) -> Result<Filtration, CliError> {
    let Some(name) = name else { return Ok(Filtration::madic(sp.source())) };
    match &named(s, name)?.object {
        Object::Filtration(f) => Ok(f.on_ring(sp.source())),
        other => Err(CliError::Usage(format!("'{name}' is a {}, not a filtration", other.kind()))),
    }
}

/// A session vector field as a tangent vector of `group`.
fn tangent_vector(v: &crate::session::VectorField, group: Group, sp: &MapSpace) -> Result<TangentVector, CliError> {
    let right = || v.right.clone().unwrap_or_else(|| vec![sp.source().zero(); sp.source().n_vars()]);
    let left = || v.left.clone().unwrap_or_else(|| vec![sp.target().zero(); sp.target().n_vars()]);
    if v.left.is_some() && !matches!(group, Group::L | Group::LR) {
        return Err(CliError::Usage(format!("{group} has no target part; drop the d/dy terms")));
    }
    if v.right.is_some() && matches!(group, Group::L | Group::C) {
        return Err(CliError::Usage(format!("{group} has no source part; drop the d/dx terms")));
    }
    Ok(match group {
        Group::R => TangentVector::Right(right()),
        Group::L => TangentVector::Left(left()),
        Group::LR => TangentVector::LeftRight { left: left(), right: right() },
        Group::C | Group::K => TangentVector::Contact {
            contact: vec![sp.contact_ring().zero(); sp.m()],
            right: right(),
        },
        Group::KLin => TangentVector::ContactLin {
            matrix: vec![vec![sp.source().zero(); sp.m()]; sp.m()],
            right: right(),
        },
    })
}

/// The composite `g_1 ∘ g_2 ∘ …` of the named elements, as an element of
/// `group` on `sp` (the extension space when any factor lives there).
fn element(s: &Session, names: &[String], group: Group) -> Result<(GroupElement, MapSpace), CliError> {
    let objs: Vec<&Named> = names.iter().map(|n| named(s, n)).collect::<Result<_, _>>()?;
    let sp = if objs.iter().any(|o| o.over_top) { top_space(s)?.clone() } else { s.space.clone() };
    let ext = s.ext.as_ref();
    let mut acc = GroupElement::identity(group, &sp);
    for o in objs {
        let own = s.space_of(o);
        let g = match &o.object {
            Object::Aut(Side::Source, a) => GroupElement::Right(a.clone()),
            Object::Aut(Side::Target, a) => GroupElement::Left(a.clone()),
            Object::Contact(c) => GroupElement::Contact {
                contact: c.clone(),
                right: germ_core::germs::Aut::identity(own.source()),
            },
            Object::Vf(v) => exp_vf(&tangent_vector(v, group, own)?, own).map_err(failed)?,
            other => return Err(CliError::Usage(format!("'{}' is a {}, not a group element", o.name, other.kind()))),
        };
        let g = if own == &sp { g } else { g.base_change(ext.expect("extension"), &sp) };
        let g = g
            .embed(group, &sp)
            .map_err(|e| CliError::Usage(format!("'{}' is not an element of {group}: {e}", o.name)))?;
        acc = acc.compose(&g).map_err(failed)?;
    }
    Ok((acc, sp))
}

fn jets_text(jets: &[Jet]) -> String {
    let parts: Vec<String> = jets.iter().map(|j| j.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Basis rows of a subspace of maps, printed as maps.
fn rows_as_maps(sp: &MapSpace, b: &SubspaceBasis) -> Vec<String> {
    let ring = sp.source();
    b.rows()
        .iter()
        .map(|r| {
            let comps: Vec<Jet> = r.chunks(ring.dim()).map(|c| Jet::from_coeffs(ring, c.to_vec())).collect();
            jets_text(&comps)
        })
        .collect()
}

fn session_summary(s: &Session) -> Value {
    let objects: Vec<Value> = s
        .objects
        .iter()
        .map(|o| {
            let data = match &o.object {
                Object::Map(m) => m.to_json(),
                Object::Aut(_, a) => a.to_json(),
                Object::Contact(c) => c.to_json(),
                _ => Value::Null,
            };
            json!({"name": o.name, "kind": o.object.kind(), "over_extension": o.over_top, "value": data})
        })
        .collect();
    json!({
        "field": s.field.to_string(),
        "extension": s.ext.as_ref().map(|e| e.top().to_string()),
        "jet": s.order,
        "source": s.space.source().vars(),
        "target": s.space.target().vars(),
        "objects": objects,
    })
}

fn read_system(path: &PathBuf) -> Result<PolySystem, CliError> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    PolySystem::from_json(&v).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Check { s, emit } => {
            let session = load_session(&s.session)?;
            if *emit {
                return Ok(Report::ok(Value::String(session.emit())));
            }
            Ok(Report::ok(session_summary(&session)))
        }
        Command::Act { s, g, elem, map: m } => {
            let session = load_session(&s.session)?;
            let (el, sp) = element(&session, elem, group(g)?)?;
            let (_, f) = map(&session, m)?;
            let moved = el.act(&lift(&session, f, &sp)).map_err(failed)?;
            Ok(Report::ok(json!({"element": el.to_json(), "map": moved.to_json()})))
        }
        Command::Tangent { s, g, map: m, level, filtration: fname } => {
            let session = load_session(&s.session)?;
            let (o, f) = map(&session, m)?;
            let sp = session.space_of(o);
            let filt = filtration(&session, fname.as_deref(), sp)?;
            let t = tangent_space(group(g)?, f, *level, &filt).map_err(failed)?;
            Ok(Report::ok(json!({"dimension": t.rank(), "basis": rows_as_maps(sp, &t)})))
        }
        Command::Level { s, g, elem, filtration: fname } => {
            let session = load_session(&s.session)?;
            let (el, sp) = element(&session, elem, group(g)?)?;
            let filt = filtration(&session, fname.as_deref(), &sp)?;
            Ok(Report::ok(json!({"element": el.to_json(), "level": group_level(&el, &filt)})))
        }
        Command::Exp { s, g, vf } => {
            let session = load_session(&s.session)?;
            let o = named(&session, vf)?;
            let Object::Vf(v) = &o.object else {
                return Err(CliError::Usage(format!("'{vf}' is a {}, not a vf", o.object.kind())));
            };
            let sp = session.space_of(o);
            let xi = tangent_vector(v, group(g)?, sp)?;
            let el = exp_vf(&xi, sp).map_err(failed)?;
            let back = log_aut(&el, sp).map_err(failed)?;
            Ok(Report::ok(json!({
                "vector": xi.to_json(),
                "element": el.to_json(),
                "level": group_level(&el, &Filtration::madic(sp.source())),
                "log_round_trip": back == xi,
            })))
        }
        Command::Log { s, g, elem } => {
            let session = load_session(&s.session)?;
            let (el, sp) = element(&session, elem, group(g)?)?;
            let xi = log_aut(&el, &sp).map_err(failed)?;
            let again = exp_vf(&xi, &sp).map_err(failed)?;
            Ok(Report::ok(json!({
                "element": el.to_json(),
                "vector": xi.to_json(),
                "exp_round_trip": again == el,
            })))
        }
        Command::ArtinRees { s, g, map: m, level, filtration: fname } => {
            let session = load_session(&s.session)?;
            let (o, f) = map(&session, m)?;
            let filt = filtration(&session, fname.as_deref(), session.space_of(o))?;
            let ar = artin_rees_bound(group(g)?, f, *level, &filt).map_err(failed)?;
            Ok(Report {
                negative: ar.bound.is_none(),
                result: ar.to_json(),
            })
        }
        Command::Descend { s, g, map: m, target, elem, level, filtration: fname } => {
            let session = load_session(&s.session)?;
            let ext = session.ext.clone().ok_or_else(|| CliError::Usage("descend needs an 'extend' stanza".into()))?;
            let group = group(g)?;
            let f = base_map(&session, m)?;
            let ft = base_map(&session, target)?;
            let (w, sp) = element(&session, elem, group)?;
            let w = if &sp == top_space(&session)? { w } else { w.base_change(&ext, top_space(&session)?) };
            let filt = filtration(&session, fname.as_deref(), &session.space)?;
            let problem = DescentProblem {
                f: f.clone(),
                f_tilde: ft.clone(),
                ext,
                witness: w,
                group,
                level: *level,
                filt: filt.clone(),
            };
            match descend(&problem) {
                Ok(cert) => {
                    let v = verify_witness(&cert.element, f, ft, *level, &filt);
                    Ok(Report::ok(json!({
                        "descended": true,
                        "certificate": cert.to_json(),
                        "verified": v.ok,
                        "level": v.level,
                    })))
                }
                Err(e @ (DescentError::Obstruction { .. } | DescentError::NoConvergence)) => Ok(Report {
                    result: json!({"descended": false, "reason": e.to_string()}),
                    negative: true,
                }),
                Err(e) => Err(failed(e)),
            }
        }
        Command::Stabilizer { s, g, map: m, level, filtration: fname } => {
            let session = load_session(&s.session)?;
            let (o, f) = map(&session, m)?;
            let filt = filtration(&session, fname.as_deref(), session.space_of(o))?;
            let el = stabilizer_sample(f, group(g)?, *level, &filt, cli.seed).map_err(failed)?;
            let v = verify_witness(&el, f, f, *level, &filt);
            Ok(Report::ok(json!({"seed": cli.seed, "element": el.to_json(), "fixes_map": v.ok, "level": v.level})))
        }
        Command::System { s, g, map: m, target, level, output } => {
            let session = load_session(&s.session)?;
            let (of, f) = map(&session, m)?;
            let (ot, ft) = map(&session, target)?;
            if of.over_top != ot.over_top {
                return Err(CliError::Usage("both maps must live over the same field".into()));
            }
            let sys = compile_system(f, ft, group(g)?, *level).map_err(failed)?;
            let v = sys.to_json();
            if let Some(path) = output {
                let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
                std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            Ok(Report::ok(v))
        }
        Command::Solve { system, field, cap } => {
            let sys = read_system(system)?;
            let field = match field {
                Some(f) => parse_field(f).map_err(|e| CliError::Usage(e.to_string()))?,
                None => sys.field().clone(),
            };
            let sols = brute_solve(&sys, &field, *cap).map_err(failed)?;
            let list: Vec<Value> = sols.iter().map(|s| s.to_json(sys.unknowns())).collect();
            Ok(Report {
                negative: sols.is_empty(),
                result: json!({"field": field.to_string(), "count": sols.len(), "solutions": list}),
            })
        }
        Command::Groebner { system, cap } => {
            let sys = read_system(system)?;
            let cap = cap.unwrap_or_else(spair_cap);
            match groebner_inconsistent(&sys, cap).map_err(failed)? {
                GroebnerOutcome::Inconsistent { trace } => Ok(Report {
                    result: json!({"inconsistent": true, "trace": trace}),
                    negative: true,
                }),
                GroebnerOutcome::Consistent { basis } => {
                    let b: Vec<String> = basis.iter().map(|p| p.display(sys.unknowns())).collect();
                    Ok(Report::ok(json!({"inconsistent": false, "basis": b})))
                }
                GroebnerOutcome::Undecided { pairs } => Err(CliError::Failed(format!(
                    "undecided after {pairs} S-pairs; raise --cap or GERM_SPAIR_CAP"
                ))),
            }
        }
        Command::Orbits { s, g, map: m, cap } => {
            let session = load_session(&s.session)?;
            let ext = session.ext.as_ref().ok_or_else(|| CliError::Usage("orbits needs an 'extend' stanza".into()))?;
            let f = base_map(&session, m)?;
            let census = orbit_split(f, group(g)?, ext, *cap).map_err(failed)?;
            Ok(Report::ok(census.to_json()))
        }
    }
}
