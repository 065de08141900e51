//! Plain-text instance formats.
//!
//! Edge lists: the first non-comment line is `n m`, followed by `m` lines
//! `u v [w]` with 0-based ids and an optional weight (default `1.0`).
//! Lines starting with `#` are comments.
//!
//! Polynomials: the first line is `n`, then `const <c0>`, then one line
//! `<c_S> <i1> <i2> ... <ik>` per monomial. The same layout is used for
//! hypergraphs, with the leading number read as the hyperedge weight and the
//! constant line optional.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, Hypergraph, PseudoBooleanPolynomial};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(0, "missing `n m` header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(hline, "header must be `n m`"));
    }
    let n: usize = parse_num(hline, toks[0], "vertex count")?;
    let m: usize = parse_num(hline, toks[1], "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, l) in lines {
        last_line = line;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 && toks.len() != 3 {
            return Err(parse_err(line, "edge line must be `u v [w]`"));
        }
        let u: usize = parse_num(line, toks[0], "vertex id")?;
        let v: usize = parse_num(line, toks[1], "vertex id")?;
        let w: f64 = match toks.get(2) {
            Some(t) => parse_num(line, t, "weight")?,
            None => 1.0,
        };
        edges.push((u, v, w));
        if edges.len() > m {
            return Err(parse_err(line, format!("more than the declared {m} edges")));
        }
    }
    if edges.len() != m {
        return Err(parse_err(last_line, format!("declared {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * g.m() + 16);
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for e in g.edges() {
        if e.weight == 1.0 {
            let _ = writeln!(out, "{} {}", e.u(), e.v());
        } else {
            let _ = writeln!(out, "{} {} {}", e.u(), e.v(), e.weight);
        }
    }
    out
}

type RawTerms = (usize, f64, Vec<(Vec<usize>, f64)>);

fn parse_terms(text: &str, require_const: bool) -> Result<RawTerms> {
    let mut lines = content_lines(text).peekable();
    let (hline, header) = lines.next().ok_or_else(|| parse_err(0, "missing vertex count"))?;
    let n: usize = parse_num(hline, header, "variable count")?;
    let mut constant = 0.0;
    match lines.peek() {
        Some((line, l)) if l.starts_with("const") => {
            let line = *line;
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 2 || toks[0] != "const" {
                return Err(parse_err(line, "expected `const <c0>`"));
            }
            constant = parse_num(line, toks[1], "constant")?;
            lines.next();
        }
        Some((line, _)) if require_const => return Err(parse_err(*line, "expected `const <c0>`")),
        None if require_const => return Err(parse_err(hline, "expected `const <c0>`")),
        _ => {}
    }
    let mut terms = Vec::new();
    for (line, l) in lines {
        let mut toks = l.split_whitespace();
        let c: f64 = parse_num(line, toks.next().unwrap_or_default(), "coefficient")?;
        let support = toks
            .map(|t| parse_num::<usize>(line, t, "variable id"))
            .collect::<Result<Vec<_>>>()?;
        if support.is_empty() {
            return Err(parse_err(line, "term has no variables"));
        }
        terms.push((support, c));
    }
    Ok((n, constant, terms))
}

pub fn parse_polynomial(text: &str) -> Result<PseudoBooleanPolynomial> {
    let (n, c0, terms) = parse_terms(text, true)?;
    PseudoBooleanPolynomial::new(n, c0, terms)
}

/// Reads a hypergraph; a `const` line, if present, is ignored.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let (n, _, terms) = parse_terms(text, false)?;
    Hypergraph::new(n, terms)
}

pub fn write_polynomial(poly: &PseudoBooleanPolynomial) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", poly.n());
    let _ = writeln!(out, "const {}", poly.constant());
    for t in poly.terms() {
        let _ = write!(out, "{}", t.coeff);
        for v in &t.support {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", h.n());
    for e in h.hyperedges() {
        let _ = write!(out, "{}", e.weight);
        for v in &e.vertices {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}
