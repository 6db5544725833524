//! Session files: line-oriented stanzas declaring a field, the source and
//! target germs and named objects. Every object is built through the core
//! constructors, so a parsed session is valid.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use germ_core::exactfield::parse_field_at;
use germ_core::expr::{ParseError, Span};
use germ_core::germs::{with_ideal, Aut, ContactMap, GermError, MapGerm, MapSpace};
use germ_core::jets::{Filtration, FiltrationSpec, Jet, JetError, JetRing};
use germ_core::tangent::{parse_vector_field, TangentError};
use germ_core::{Extension, Field, FieldError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("line {line}, column {col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}, column {col}: {message}")]
    Semantic { line: usize, col: usize, message: String },
}

impl SessionError {
    fn syntax(at: Span, message: impl Into<String>) -> SessionError {
        SessionError::Syntax {
            line: at.line,
            col: at.col,
            message: message.into(),
        }
    }

    fn semantic(at: Span, message: impl std::fmt::Display) -> SessionError {
        SessionError::Semantic {
            line: at.line,
            col: at.col,
            message: message.to_string(),
        }
    }

    pub fn line(&self) -> usize {
        match self {
            SessionError::Syntax { line, .. } | SessionError::Semantic { line, .. } => *line,
        }
    }
}

impl From<ParseError> for SessionError {
    fn from(p: ParseError) -> SessionError {
        SessionError::Syntax {
            line: p.line,
            col: p.col,
            message: p.message,
        }
    }
}

fn field_err(e: FieldError, at: Span) -> SessionError {
    match e {
        FieldError::Syntax(p) => p.into(),
        e => SessionError::semantic(at, e),
    }
}

fn jet_err(e: JetError, at: Span) -> SessionError {
    match e {
        JetError::Parse(p) | JetError::Field(FieldError::Syntax(p)) => p.into(),
        e => SessionError::semantic(at, e),
    }
}

fn germ_err(e: GermError, at: Span) -> SessionError {
    match e {
        GermError::Jet(j) => jet_err(j, at),
        e => SessionError::semantic(at, e),
    }
}

/// Which germ an automorphism or vector-field part acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

/// A vector field `Σ a_i ∂/∂x_i + Σ b_k ∂/∂y_k`; absent parts are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    pub right: Option<Vec<Jet>>,
    pub left: Option<Vec<Jet>>,
}

#[derive(Clone, PartialEq, Eq)]
pub enum Object {
    Filtration(Filtration),
    Map(MapGerm),
    Aut(Side, Aut),
    Vf(VectorField),
    Contact(ContactMap),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Filtration(_) => "filtration",
            Object::Map(_) => "map",
            Object::Aut(..) => "aut",
            Object::Vf(_) => "vf",
            Object::Contact(_) => "contact",
        }
    }
}

/// A named object; `over_top` when it is defined over the extension field.
#[derive(Clone, PartialEq, Eq)]
pub struct Named {
    pub name: String,
    pub over_top: bool,
    pub object: Object,
}

#[derive(Clone, PartialEq, Eq)]
pub struct GermDecl {
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub ideal: Vec<Jet>,
}

#[derive(Clone)]
pub struct Session {
    pub field: Field,
    pub ext: Option<Extension>,
    pub order: u32,
    pub param_order: u32,
    pub source: GermDecl,
    pub target: GermDecl,
    pub space: MapSpace,
    /// The space over the extension field, when there is one.
    pub space_top: Option<MapSpace>,
    pub objects: Vec<Named>,
}

impl PartialEq for Session {
    fn eq(&self, other: &Session) -> bool {
        self.field == other.field
            && self.ext == other.ext
            && self.order == other.order
            && self.param_order == other.param_order
            && self.source == other.source
            && self.target == other.target
            && self.objects == other.objects
    }
}

impl std::fmt::Debug for Session {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.emit())
    }
}

/// One stanza after the syntax pass: keyword, optional `NAME =`, and the
/// rest of the line with the position where it starts.
struct Stanza {
    at: Span,
    keyword: String,
    name: Option<(String, Span)>,
    body: String,
    body_at: Span,
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|h| h.is_ascii_alphabetic() || h == '_') && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Advances a span over `s` on one line.
fn shift(at: Span, s: &str) -> Span {
    Span {
        line: at.line,
        col: at.col + s.chars().count(),
    }
}

/// Splits `(a, b, …)` at top-level commas; each part comes with its start.
fn split_tuple(text: &str, at: Span) -> Result<Vec<(String, Span)>, SessionError> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    let at = shift(at, &text[..lead]);
    if !t.starts_with('(') {
        return Err(SessionError::syntax(at, "expected '('"));
    }
    let mut depth = 0usize;
    let mut parts = Vec::new();
    let mut start = 1;
    let mut close = None;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(i);
                    break;
                }
            }
            ',' if depth == 1 => {
                parts.push((t[start..i].to_string(), shift(at, &t[..start])));
                start = i + 1;
            }
            _ => {}
        }
    }
    let Some(close) = close else {
        return Err(SessionError::syntax(shift(at, t), "unbalanced parenthesis"));
    };
    if !t[close + 1..].trim().is_empty() {
        return Err(SessionError::syntax(shift(at, &t[..close + 1]), "unexpected text after ')'"));
    }
    let last = &t[start..close];
    if !(parts.is_empty() && last.trim().is_empty()) {
        parts.push((last.to_string(), shift(at, &t[..start])));
    }
    for (p, span) in &parts {
        if p.trim().is_empty() {
            return Err(SessionError::syntax(*span, "empty component"));
        }
    }
    Ok(parts)
}

/// Identifiers occurring in `text`.
fn identifiers(text: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut cur = String::new();
    let mut in_number = false;
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            if cur.is_empty() {
                in_number = ch.is_ascii_digit();
            }
            cur.push(ch);
        } else {
            if !cur.is_empty() && !in_number {
                out.insert(std::mem::take(&mut cur));
            }
            cur.clear();
        }
    }
    out
}

const NAMED: [&str; 5] = ["filtration", "map", "aut", "vf", "contact"];
const PLAIN: [&str; 6] = ["field", "extend", "jet", "tjet", "source", "target"];

/// The syntax pass: comments, keywords, `NAME =` and bracket balance.
fn lex(text: &str) -> Result<Vec<Stanza>, SessionError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let lead = line.len() - line.trim_start().len();
        let at = Span { line: i + 1, col: lead + 1 };
        let rest = &line[lead..];
        let kw_len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let keyword = &rest[..kw_len];
        let after = &rest[kw_len..];
        let after_at = shift(at, keyword);
        if PLAIN.contains(&keyword) {
            out.push(Stanza {
                at,
                keyword: keyword.to_string(),
                name: None,
                body: after.to_string(),
                body_at: after_at,
            });
        } else if NAMED.contains(&keyword) {
            let Some(eq) = after.find('=') else {
                return Err(SessionError::syntax(after_at, format!("expected '{keyword} NAME = …'")));
            };
            let name = after[..eq].trim();
            let name_at = shift(after_at, &after[..after[..eq].len() - after[..eq].trim_start().len()]);
            if !is_ident(name) {
                return Err(SessionError::syntax(name_at, format!("bad name '{name}'")));
            }
            let body = &after[eq + 1..];
            let body_at = shift(after_at, &after[..eq + 1]);
            if keyword != "vf" && keyword != "filtration" {
                split_tuple(body, body_at)?;
            }
            out.push(Stanza {
                at,
                keyword: keyword.to_string(),
                name: Some((name.to_string(), name_at)),
                body: body.to_string(),
                body_at,
            });
        } else {
            return Err(SessionError::syntax(at, format!("unknown stanza '{keyword}'")));
        }
    }
    Ok(out)
}

/// `vars: x, y params: t ideal: (x*y)`, each key optional except `vars`.
fn parse_decl(body: &str, at: Span) -> Result<(Vec<String>, Vec<String>, String, Span), SessionError> {
    let keys = ["vars:", "params:", "ideal:"];
    let mut found: Vec<(usize, &str)> = keys.iter().filter_map(|k| body.find(k).map(|p| (p, *k))).collect();
    found.sort();
    if !body[..found.first().map_or(body.len(), |f| f.0)].trim().is_empty() {
        return Err(SessionError::syntax(at, "expected 'vars:'"));
    }
    let section = |key: &str| -> Option<(&str, Span)> {
        let k = found.iter().position(|f| f.1 == key)?;
        let start = found[k].0 + key.len();
        let end = found.get(k + 1).map_or(body.len(), |f| f.0);
        Some((&body[start..end], shift(at, &body[..start])))
    };
    let names = |key: &str| -> Result<Vec<String>, SessionError> {
        let Some((s, span)) = section(key) else { return Ok(Vec::new()) };
        let v: Vec<String> = s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
        if let Some(bad) = v.iter().find(|x| !is_ident(x)) {
            return Err(SessionError::syntax(span, format!("bad variable name '{bad}'")));
        }
        Ok(v)
    };
    let vars = names("vars:")?;
    if vars.is_empty() {
        return Err(SessionError::syntax(at, "expected 'vars:' with at least one variable"));
    }
    let params = names("params:")?;
    let (ideal, ideal_at) = section("ideal:").map_or(("()".to_string(), at), |(s, a)| (s.to_string(), a));
    Ok((vars, params, ideal, ideal_at))
}

#[derive(Default)]
struct Builder {
    field: Option<Field>,
    ext: Option<Extension>,
    order: Option<u32>,
    param_order: Option<u32>,
    source: Option<(GermDecl, JetRing)>,
    target: Option<(GermDecl, JetRing)>,
    space: Option<(MapSpace, Option<MapSpace>)>,
    objects: Vec<Named>,
}

impl Builder {
    fn field(&self, at: Span) -> Result<Field, SessionError> {
        self.field.clone().ok_or_else(|| SessionError::semantic(at, "no field declared yet"))
    }

    fn header(&self, s: &Stanza) -> Result<(), SessionError> {
        if self.space.is_some() {
            return Err(SessionError::semantic(s.at, format!("'{}' must precede all named objects", s.keyword)));
        }
        Ok(())
    }

    fn stanza(&mut self, s: &Stanza) -> Result<(), SessionError> {
        let body = s.body.trim();
        let body_at = shift(s.body_at, &s.body[..s.body.len() - s.body.trim_start().len()]);
        match s.keyword.as_str() {
            "field" => {
                self.header(s)?;
                if self.field.is_some() {
                    return Err(SessionError::semantic(s.at, "field declared twice"));
                }
                self.field = Some(parse_field_at(body, body_at).map_err(|e| field_err(e, body_at))?);
            }
            "extend" => {
                self.header(s)?;
                let k = self.field(s.at)?;
                let top = parse_field_at(body, body_at).map_err(|e| field_err(e, body_at))?;
                self.ext = Some(Extension::between(&k, &top).map_err(|e| field_err(e, body_at))?);
            }
            "jet" | "tjet" => {
                self.header(s)?;
                let n: u32 = body
                    .parse()
                    .map_err(|_| SessionError::syntax(body_at, format!("expected a jet order, got '{body}'")))?;
                if s.keyword == "jet" {
                    self.order = Some(n);
                } else {
                    self.param_order = Some(n);
                }
            }
            "source" | "target" => {
                self.header(s)?;
                let decl = self.germ(s, body, body_at)?;
                if s.keyword == "source" {
                    self.source = Some(decl);
                } else {
                    self.target = Some(decl);
                }
            }
            _ => self.object(s, body, body_at)?,
        }
        Ok(())
    }

    fn germ(&self, s: &Stanza, body: &str, body_at: Span) -> Result<(GermDecl, JetRing), SessionError> {
        let field = self.field(s.at)?;
        let order = self.order.ok_or_else(|| SessionError::semantic(s.at, "'jet N' must precede the germs"))?;
        let (vars, params, ideal, ideal_at) = parse_decl(body, body_at)?;
        if s.keyword == "target" && !params.is_empty() {
            return Err(SessionError::semantic(s.at, "the target takes no parameters"));
        }
        let param_order = match (params.is_empty(), self.param_order) {
            (true, _) => 0,
            (false, Some(p)) => p,
            (false, None) => return Err(SessionError::semantic(s.at, "parameters need 'tjet N'")),
        };
        let mut seen = BTreeSet::new();
        if let Some(dup) = vars.iter().chain(&params).find(|v| !seen.insert(v.as_str())) {
            return Err(SessionError::semantic(s.at, format!("variable '{dup}' declared twice")));
        }
        let free = JetRing::with_params(&field, &vars, &params, order, param_order);
        let mut gens = Vec::new();
        for (g, at) in split_tuple(&ideal, ideal_at)? {
            gens.push(free.parse_at(g.trim(), shift(at, &g[..g.len() - g.trim_start().len()])).map_err(|e| jet_err(e, at))?);
        }
        let ring = with_ideal(&free, &gens).map_err(|e| germ_err(e, ideal_at))?;
        Ok((GermDecl { vars, params, ideal: gens }, ring))
    }

    fn space(&mut self, at: Span) -> Result<(MapSpace, Option<MapSpace>), SessionError> {
        if let Some(sp) = &self.space {
            return Ok(sp.clone());
        }
        let (Some((sd, src)), Some((td, tgt))) = (&self.source, &self.target) else {
            return Err(SessionError::semantic(at, "'source' and 'target' must precede named objects"));
        };
        if let Some(v) = td.vars.iter().find(|v| sd.vars.contains(v) || sd.params.contains(v)) {
            return Err(SessionError::semantic(at, format!("variable '{v}' names both a source and a target coordinate")));
        }
        let sp = MapSpace::new(src, tgt).map_err(|e| germ_err(e, at))?;
        let top = self.ext.as_ref().map(|e| sp.base_change(e));
        self.space = Some((sp, top));
        Ok(self.space.clone().expect("just built"))
    }
}

impl Builder {
    fn object(&mut self, s: &Stanza, body: &str, body_at: Span) -> Result<(), SessionError> {
        let (name, name_at) = s.name.clone().expect("named stanza");
        if self.objects.iter().any(|o| o.name == name) {
            return Err(SessionError::semantic(name_at, format!("name '{name}' is already defined")));
        }
        let (sp, top) = self.space(s.at)?;
        let gen = self.ext.as_ref().and_then(|e| e.top().generator_name().map(String::from));
        let over_top = gen.is_some_and(|g| identifiers(body).contains(&g)) && s.keyword != "filtration";
        let sp = if over_top { top.expect("extension declared") } else { sp };
        let jets = |ring: &JetRing| -> Result<Vec<Jet>, SessionError> {
            split_tuple(body, body_at)?
                .into_iter()
                .map(|(c, at)| {
                    let lead = c.len() - c.trim_start().len();
                    ring.parse_at(c.trim(), shift(at, &c[..lead])).map_err(|e| jet_err(e, at))
                })
                .collect()
        };
        let object = match s.keyword.as_str() {
            "map" => Object::Map(MapGerm::new(&sp, jets(sp.source())?).map_err(|e| germ_err(e, body_at))?),
            "aut" => {
                let ids = identifiers(body);
                let side = if sp.target().vars().iter().any(|v| ids.contains(v)) { Side::Target } else { Side::Source };
                let ring = if side == Side::Source { sp.source() } else { sp.target() };
                Object::Aut(side, Aut::new(ring, jets(ring)?).map_err(|e| germ_err(e, body_at))?)
            }
            "contact" => {
                Object::Contact(ContactMap::new(&sp, jets(sp.contact_ring())?).map_err(|e| germ_err(e, body_at))?)
            }
            "vf" => Object::Vf(vector_field(&sp, body, body_at)?),
            _ => Object::Filtration(filtration(sp.source(), body, body_at)?),
        };
        self.objects.push(Named { name, over_top, object });
        Ok(())
    }
}

fn tangent_err(e: TangentError, at: Span) -> SessionError {
    match e {
        TangentError::Syntax(m) => SessionError::syntax(at, m),
        TangentError::Jet(j) => jet_err(j, at),
        e => SessionError::semantic(at, e),
    }
}

/// Splits `a d/dx + b d/du` into its source and target terms.
fn vector_field(sp: &MapSpace, body: &str, at: Span) -> Result<VectorField, SessionError> {
    let (mut right, mut left) = (String::new(), String::new());
    let mut rest = body;
    while let Some(p) = rest.find("d/d") {
        let tail = &rest[p + 3..];
        let len = tail.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(tail.len());
        let var = &tail[..len];
        let term = &rest[..p + 3 + len];
        if sp.source().var_index(var).is_some() {
            right.push_str(term);
        } else if sp.target().var_index(var).is_some() {
            left.push_str(term);
        } else {
            return Err(SessionError::syntax(at, format!("unknown variable '{var}' in d/d{var}")));
        }
        rest = &tail[len..];
    }
    if !rest.trim().is_empty() && !(body.trim() == "0") {
        return Err(SessionError::syntax(at, format!("missing d/d<var> after '{}'", rest.trim())));
    }
    let part = |ring: &JetRing, text: &str| -> Result<Option<Vec<Jet>>, SessionError> {
        if text.trim().is_empty() {
            return Ok(None);
        }
        let comps = parse_vector_field(ring, text).map_err(|e| tangent_err(e, at))?;
        // a part that vanishes (say `3*x d/dx` in characteristic 3) is absent
        Ok(Some(comps).filter(|c| c.iter().any(|j| !j.is_zero())))
    };
    Ok(VectorField {
        right: part(sp.source(), &right)?,
        left: part(sp.target(), &left)?,
    })
}

/// `madic`, `tadic` or `chain[(x^2, y); (x^3)]`.
fn filtration(ring: &JetRing, body: &str, at: Span) -> Result<Filtration, SessionError> {
    let spec = match body {
        "madic" => FiltrationSpec::MAdic,
        "tadic" => FiltrationSpec::TAdic,
        _ => {
            let inner = body
                .strip_prefix("chain[")
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| SessionError::syntax(at, "expected madic, tadic or chain[(…); …]"))?;
            let inner_at = shift(at, "chain[");
            let mut levels = Vec::new();
            let mut offset = 0;
            for level in inner.split(';') {
                let level_at = shift(inner_at, &inner[..offset]);
                offset += level.len() + 1;
                let mut monos = Vec::new();
                for (m, m_at) in split_tuple(level, level_at)? {
                    let j = ring.parse_at(m.trim(), m_at).map_err(|e| jet_err(e, m_at))?;
                    let mut support = j.support();
                    match (support.next(), support.next()) {
                        (Some(i), None) if j.coeff_at(i).is_one() => monos.push(ring.shape().monomial(i).to_vec()),
                        _ => return Err(SessionError::semantic(m_at, format!("'{}' is not a monomial", m.trim()))),
                    }
                }
                levels.push(monos);
            }
            FiltrationSpec::Chain(levels)
        }
    };
    Filtration::new(ring, spec).map_err(|e| SessionError::semantic(at, e))
}

pub fn parse_session(text: &str) -> Result<Session, SessionError> {
    let stanzas = lex(text)?;
    let mut b = Builder::default();
    for s in &stanzas {
        b.stanza(s)?;
    }
    let end = Span { line: text.lines().count().max(1), col: 1 };
    let (space, space_top) = b.space(end)?;
    let field = b.field(end)?;
    Ok(Session {
        field,
        ext: b.ext,
        order: b.order.expect("checked by the germ stanzas"),
        param_order: space.source().param_order(),
        source: b.source.expect("space built").0,
        target: b.target.expect("space built").0,
        space,
        space_top,
        objects: b.objects,
    })
}

fn tuple(jets: &[Jet]) -> String {
    let parts: Vec<String> = jets.iter().map(|j| j.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn vf_text(ring: &JetRing, coeffs: &[Jet], out: &mut Vec<String>) {
    for (v, c) in ring.vars().iter().zip(coeffs) {
        if !c.is_zero() {
            out.push(format!("({c}) d/d{v}"));
        }
    }
}

impl Session {
    /// Canonical session text; parsing it gives back an equal session.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "field {}", self.field);
        if let Some(e) = &self.ext {
            let _ = writeln!(s, "extend {}", e.top());
        }
        let _ = writeln!(s, "jet {}", self.order);
        if !self.source.params.is_empty() {
            let _ = writeln!(s, "tjet {}", self.param_order);
        }
        for (kw, d) in [("source", &self.source), ("target", &self.target)] {
            let _ = write!(s, "{kw} vars: {}", d.vars.join(", "));
            if !d.params.is_empty() {
                let _ = write!(s, " params: {}", d.params.join(", "));
            }
            let _ = writeln!(s, " ideal: {}", tuple(&d.ideal));
        }
        for o in &self.objects {
            let body = match &o.object {
                Object::Filtration(f) => match f.spec() {
                    FiltrationSpec::MAdic => "madic".to_string(),
                    FiltrationSpec::TAdic => "tadic".to_string(),
                    FiltrationSpec::Chain(levels) => {
                        let ring = f.ring();
                        let lv: Vec<String> = levels
                            .iter()
                            .map(|l| {
                                let ms: Vec<String> = l
                                    .iter()
                                    .map(|e| germ_core::jets::monomial::format_exponents(ring.vars(), e))
                                    .collect();
                                format!("({})", ms.join(", "))
                            })
                            .collect();
                        format!("chain[{}]", lv.join("; "))
                    }
                },
                Object::Map(m) => tuple(m.comps()),
                Object::Aut(_, a) => tuple(a.comps()),
                Object::Contact(c) => tuple(c.comps()),
                Object::Vf(v) => {
                    let sp = if o.over_top { self.space_top.as_ref().expect("extension") } else { &self.space };
                    let mut terms = Vec::new();
                    if let Some(r) = &v.right {
                        vf_text(sp.source(), r, &mut terms);
                    }
                    if let Some(l) = &v.left {
                        vf_text(sp.target(), l, &mut terms);
                    }
                    if terms.is_empty() {
                        "0".to_string()
                    } else {
                        terms.join(" + ")
                    }
                }
            };
            let _ = writeln!(s, "{} {} = {body}", o.object.kind(), o.name);
        }
        s
    }

    pub fn get(&self, name: &str) -> Option<&Named> {
        self.objects.iter().find(|o| o.name == name)
    }

    /// The space an object lives on.
    pub fn space_of(&self, o: &Named) -> &MapSpace {
        if o.over_top {
            self.space_top.as_ref().expect("objects over the extension need one")
        } else {
            &self.space
        }
    }
}
