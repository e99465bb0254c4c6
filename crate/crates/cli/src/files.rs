//! Input files: a `key: value` header followed by polynomial lines.
//!
//! ```text
//! # comments run to end of line
//! generators: u, t
//! base_ring: Z[u]
//! vars: X1, X2
//! coords: t, u*t + 1/t
//! poly: X2 - X1^2
//! X1*X2 - u
//! ```
//!
//! Point files need `generators` and `coords`. Polynomial files take bare
//! lines or `poly:` lines.

use std::fmt;
use std::path::Path;

use dspec_core::exact::{parse_fraction, parse_poly, Poly, Vars};
use dspec_core::order::FieldContext;
use dspec_core::spectrum::SpecPoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub source: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}: {}", self.source, self.message)
        } else {
            write!(f, "{}:{}:{}: {}", self.source, self.line, self.column, self.message)
        }
    }
}

impl Diagnostic {
    fn new(source: &str, line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            source: source.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    fn whole(source: &str, message: impl Into<String>) -> Self {
        Diagnostic::new(source, 0, 0, message)
    }
}

/// A value with its 1-based line and the column where it starts.
#[derive(Debug, Clone)]
struct Located {
    line: usize,
    column: usize,
    text: String,
}

#[derive(Debug, Default)]
struct RawFile {
    generators: Option<Located>,
    base_ring: Option<Located>,
    vars: Option<Located>,
    coords: Option<Located>,
    polys: Vec<Located>,
}

fn lex_file(source: &str, src: &str) -> Result<RawFile, Diagnostic> {
    let mut raw = RawFile::default();
    for (i, full) in src.lines().enumerate() {
        let line = i + 1;
        let body = full.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let key_end = body.find(':');
        let key = key_end.map(|k| body[..k].trim());
        let is_key = key.is_some_and(|k| !k.is_empty() && k.chars().all(|c| c.is_ascii_alphabetic() || c == '_'));
        if !is_key {
            raw.polys.push(located(line, body, 0));
            continue;
        }
        let k = key_end.expect("checked above");
        let value = located(line, body, k + 1);
        let slot = match key.expect("checked above") {
            "generators" => &mut raw.generators,
            "base_ring" => &mut raw.base_ring,
            "vars" => &mut raw.vars,
            "coords" => &mut raw.coords,
            "poly" => {
                raw.polys.push(value);
                continue;
            }
            other => {
                return Err(Diagnostic::new(source, line, 1, format!("unknown header key `{other}`")));
            }
        };
        if slot.is_some() {
            return Err(Diagnostic::new(source, line, 1, "duplicate header key"));
        }
        *slot = Some(value);
    }
    Ok(raw)
}

/// The part of `body` after byte offset `start`, with its character column.
fn located(line: usize, body: &str, start: usize) -> Located {
    let rest = &body[start..];
    let lead = rest.len() - rest.trim_start().len();
    Located {
        line,
        column: body[..start + lead].chars().count() + 1,
        text: rest.trim().to_string(),
    }
}

/// Splits at commas outside parentheses, keeping character offsets.
fn split_top_level(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut current = String::new();
    for (i, c) in text.chars().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, std::mem::take(&mut current)));
                start = i + 1;
                continue;
            }
            _ => {}
        }
        current.push(c);
    }
    out.push((start, current));
    out.into_iter()
        .map(|(s, piece)| {
            let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
            (s + lead, piece.trim().to_string())
        })
        .collect()
}

fn names(source: &str, loc: &Located) -> Result<Vec<String>, Diagnostic> {
    let mut out = Vec::new();
    for (off, name) in split_top_level(&loc.text) {
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Diagnostic::new(
                source,
                loc.line,
                loc.column + off,
                format!("`{name}` is not a variable name"),
            ));
        }
        out.push(name);
    }
    Ok(out)
}

/// Parses a generator list such as `u, t`.
pub fn parse_generators(text: &str) -> Result<Vec<String>, Diagnostic> {
    let loc = Located {
        line: 0,
        column: 1,
        text: text.trim().to_string(),
    };
    names("--generators", &loc)
}

/// `Z` or `Z[g₁, …, g_e]`, where the listed generators must be the first
/// `e` declared ones in order.
fn base_ring_cutoff(source: &str, loc: &Located, generators: &[String]) -> Result<usize, Diagnostic> {
    let t = loc.text.replace(' ', "");
    if t == "Z" {
        return Ok(0);
    }
    let inner = t
        .strip_prefix("Z[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Diagnostic::new(source, loc.line, loc.column, format!("expected `Z` or `Z[...]`, found `{}`", loc.text)))?;
    let listed: Vec<&str> = inner.split(',').collect();
    if listed.len() > generators.len() || listed.iter().zip(generators).any(|(a, b)| a != b) {
        return Err(Diagnostic::new(
            source,
            loc.line,
            loc.column,
            format!(
                "base ring generators must be a prefix of the declared generators ({})",
                generators.join(", ")
            ),
        ));
    }
    Ok(listed.len())
}

fn field_of(source: &str, raw: &RawFile) -> Result<Option<FieldContext>, Diagnostic> {
    let Some(gl) = &raw.generators else {
        if let Some(b) = &raw.base_ring {
            return Err(Diagnostic::new(source, b.line, 1, "`base_ring` needs a `generators` line"));
        }
        return Ok(None);
    };
    let gens = names(source, gl)?;
    let cutoff = match &raw.base_ring {
        Some(b) => base_ring_cutoff(source, b, &gens)?,
        None => 0,
    };
    FieldContext::new(&gens, cutoff)
        .map(Some)
        .map_err(|e| Diagnostic::new(source, gl.line, gl.column, e.to_string()))
}

pub fn read(path: &Path) -> Result<String, Diagnostic> {
    std::fs::read_to_string(path).map_err(|e| Diagnostic::whole(&path.display().to_string(), e.to_string()))
}

/// A point file: generators, optional base ring and variable names, and
/// coordinates.
pub fn parse_point(source: &str, src: &str) -> Result<SpecPoint, Diagnostic> {
    let raw = lex_file(source, src)?;
    let field = field_of(source, &raw)?
        .ok_or_else(|| Diagnostic::whole(source, "missing `generators` line"))?;
    let cl = raw
        .coords
        .as_ref()
        .ok_or_else(|| Diagnostic::whole(source, "missing `coords` line"))?;
    if let Some(p) = raw.polys.first() {
        return Err(Diagnostic::new(source, p.line, p.column, "unexpected line in a point file"));
    }
    let mut coords = Vec::new();
    for (off, piece) in split_top_level(&cl.text) {
        if piece.is_empty() {
            return Err(Diagnostic::new(source, cl.line, cl.column + off, "empty coordinate"));
        }
        let x = parse_fraction(&piece, field.generators())
            .map_err(|e| Diagnostic::new(source, cl.line, cl.column + off + e.column - 1, e.message))?;
        coords.push(x);
    }
    let x_vars = match &raw.vars {
        Some(vl) => {
            let vs = names(source, vl)?;
            Vars::new(&vs).map_err(|e| Diagnostic::new(source, vl.line, vl.column, e.to_string()))?
        }
        None => Vars::indexed("X", coords.len()),
    };
    SpecPoint::with_var_names(field, x_vars, coords)
        .map_err(|e| Diagnostic::new(source, cl.line, cl.column, e.to_string()))
}

fn parse_lines(source: &str, lines: &[Located], vars: &Vars) -> Result<Vec<Poly>, Diagnostic> {
    lines
        .iter()
        .map(|l| {
            parse_poly(&l.text, vars)
                .map_err(|e| Diagnostic::new(source, l.line, l.column + e.column - 1, e.message))
        })
        .collect()
}

/// A corpus for a given point. Polynomials are over the point's
/// coordinate names and field generators; a header, if present, must
/// agree with the point.
pub fn parse_corpus(source: &str, src: &str, point: &SpecPoint) -> Result<Vec<Poly>, Diagnostic> {
    let raw = lex_file(source, src)?;
    if let Some(c) = &raw.coords {
        return Err(Diagnostic::new(source, c.line, 1, "`coords` is not allowed in a corpus file"));
    }
    if let Some(f) = field_of(source, &raw)? {
        if &f != point.field() {
            let line = raw.generators.as_ref().map_or(1, |g| g.line);
            return Err(Diagnostic::new(source, line, 1, "corpus header does not match the point's field"));
        }
    }
    if let Some(vl) = &raw.vars {
        if names(source, vl)? != point.x_vars().names() {
            return Err(Diagnostic::new(source, vl.line, vl.column, "corpus variables do not match the point"));
        }
    }
    if raw.polys.is_empty() {
        return Err(Diagnostic::whole(source, "corpus is empty"));
    }
    let vars = point
        .x_vars()
        .concat(point.field().generators())
        .map_err(|e| Diagnostic::whole(source, e.to_string()))?;
    parse_lines(source, &raw.polys, &vars)
}

/// Polynomials with `n` coordinates followed by coefficient variables.
#[derive(Debug, Clone)]
pub struct PolyFile {
    pub n: usize,
    pub polys: Vec<Poly>,
}

/// Largest `k` among identifiers `Xk` in the text.
fn max_x_index(text: &str) -> usize {
    let mut best = 0;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_ascii_alphabetic() || chars[i] == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            if let Some(k) = ident.strip_prefix('X').and_then(|d| d.parse::<usize>().ok()) {
                if !ident[1..].starts_with('0') {
                    best = best.max(k);
                }
            }
        } else {
            i += 1;
        }
    }
    best
}

/// A polynomial file for the operator commands. Coordinates come from a
/// `vars` line or are inferred as `X1..Xn` from the largest index used;
/// the generators of the base ring, if declared, act as coefficients.
pub fn parse_poly_file(source: &str, src: &str) -> Result<PolyFile, Diagnostic> {
    let raw = lex_file(source, src)?;
    if let Some(c) = &raw.coords {
        return Err(Diagnostic::new(source, c.line, 1, "`coords` is not allowed in a polynomial file"));
    }
    if raw.polys.is_empty() {
        return Err(Diagnostic::whole(source, "no polynomials"));
    }
    let x_vars = match &raw.vars {
        Some(vl) => {
            let vs = names(source, vl)?;
            Vars::new(&vs).map_err(|e| Diagnostic::new(source, vl.line, vl.column, e.to_string()))?
        }
        None => {
            let n = raw.polys.iter().map(|l| max_x_index(&l.text)).max().unwrap_or(0);
            if n == 0 {
                return Err(Diagnostic::whole(source, "no coordinate variables X1, X2, ... found"));
            }
            Vars::indexed("X", n)
        }
    };
    let coeff_vars = match field_of(source, &raw)? {
        Some(f) => f.base_ring_vars(),
        None => Vars::indexed("X", 0),
    };
    let vars = x_vars
        .concat(&coeff_vars)
        .map_err(|e| Diagnostic::whole(source, e.to_string()))?;
    let polys = parse_lines(source, &raw.polys, &vars)?;
    Ok(PolyFile {
        n: x_vars.len(),
        polys,
    })
}
