//! DIMACS CNF and `p col` edge-list text formats.
//!
//! Edge lists use a `p col N E` header followed by one `u v` pair per line,
//! with vertices numbered from 1 in the file. Lines starting with `c` are
//! comments in both formats.

use std::fmt::Write as _;

use thiserror::Error;

use super::{CnfInstance, Graph, Lit};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseErrorKind {
    #[error("missing or malformed header (expected `{0}`)")]
    BadHeader(&'static str),
    #[error("content before header")]
    MissingHeader,
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("literal {lit} out of range for {num_vars} variables")]
    LiteralOutOfRange { lit: i64, num_vars: usize },
    #[error("clause has {found} literals, expected {expected}")]
    WrongArity { expected: usize, found: usize },
    #[error("duplicate variable {0} in clause")]
    DuplicateVariable(usize),
    #[error("complementary literals on variable {0}")]
    ComplementaryLiterals(usize),
    #[error("clause not terminated by 0")]
    UnterminatedClause,
    #[error("header declares {declared} {what}, found {found}")]
    CountMismatch { what: &'static str, declared: usize, found: usize },
    #[error("vertex {vertex} out of range for {num_vertices} vertices")]
    VertexOutOfRange { vertex: i64, num_vertices: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("expected exactly two vertices per edge line")]
    BadEdgeLine,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn parse_int(tok: &str, line: usize) -> Result<i64, ParseError> {
    tok.parse::<i64>().map_err(|_| err(line, ParseErrorKind::BadInteger(tok.to_string())))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c') && !l.starts_with('%'))
}

/// Parses a DIMACS CNF file. All clauses must share one width `k` (inferred
/// from the first clause; 3 for an empty formula).
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, ParseError> {
    const HEADER: &str = "p cnf <vars> <clauses>";
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| err(0, ParseErrorKind::BadHeader(HEADER)))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
        let kind =
            if toks.first() == Some(&"p") { ParseErrorKind::BadHeader(HEADER) } else { ParseErrorKind::MissingHeader };
        return Err(err(hline, kind));
    }
    let num_vars =
        usize::try_from(parse_int(toks[2], hline)?).map_err(|_| err(hline, ParseErrorKind::BadHeader(HEADER)))?;
    let declared =
        usize::try_from(parse_int(toks[3], hline)?).map_err(|_| err(hline, ParseErrorKind::BadHeader(HEADER)))?;
    if num_vars == 0 {
        return Err(err(hline, ParseErrorKind::BadHeader(HEADER)));
    }

    let mut clauses: Vec<Vec<Lit>> = Vec::with_capacity(declared);
    let mut k: Option<usize> = None;
    let mut current: Vec<Lit> = Vec::new();
    let mut current_start = 0;
    let mut last_line = hline;
    for (ln, l) in lines {
        last_line = ln;
        for tok in l.split_whitespace() {
            if current.is_empty() {
                current_start = ln;
            }
            let x = parse_int(tok, ln)?;
            if x == 0 {
                let width = *k.get_or_insert(current.len());
                if current.len() != width {
                    return Err(err(
                        current_start,
                        ParseErrorKind::WrongArity { expected: width, found: current.len() },
                    ));
                }
                current.sort_by_key(|l| l.var());
                for w in current.windows(2) {
                    if w[0].var() == w[1].var() {
                        let kind = if w[0] == w[1] {
                            ParseErrorKind::DuplicateVariable(w[0].var())
                        } else {
                            ParseErrorKind::ComplementaryLiterals(w[0].var())
                        };
                        return Err(err(current_start, kind));
                    }
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if x.unsigned_abs() as usize > num_vars {
                    return Err(err(ln, ParseErrorKind::LiteralOutOfRange { lit: x, num_vars }));
                }
                current.push(Lit::from_dimacs(x as i32).expect("nonzero"));
            }
        }
    }
    if !current.is_empty() {
        return Err(err(last_line, ParseErrorKind::UnterminatedClause));
    }
    if clauses.len() != declared {
        return Err(err(hline, ParseErrorKind::CountMismatch { what: "clauses", declared, found: clauses.len() }));
    }
    let k = k.unwrap_or(3);
    // Every invariant was checked above, so construction cannot fail.
    Ok(CnfInstance::new(num_vars, k, clauses).expect("validated clauses"))
}

/// Canonical DIMACS text: header, then one clause per line in stored order.
pub fn emit_dimacs(instance: &CnfInstance) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", instance.num_vars(), instance.num_clauses()).unwrap();
    for clause in instance.clauses() {
        for l in clause {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses a `p col N E` edge list with 1-based vertex numbers.
pub fn parse_edges(text: &str) -> Result<Graph, ParseError> {
    const HEADER: &str = "p col <vertices> <edges>";
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| err(0, ParseErrorKind::BadHeader(HEADER)))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "p" || toks[1] != "col" {
        let kind =
            if toks.first() == Some(&"p") { ParseErrorKind::BadHeader(HEADER) } else { ParseErrorKind::MissingHeader };
        return Err(err(hline, kind));
    }
    let n = usize::try_from(parse_int(toks[2], hline)?).map_err(|_| err(hline, ParseErrorKind::BadHeader(HEADER)))?;
    let declared =
        usize::try_from(parse_int(toks[3], hline)?).map_err(|_| err(hline, ParseErrorKind::BadHeader(HEADER)))?;
    if n == 0 {
        return Err(err(hline, ParseErrorKind::BadHeader(HEADER)));
    }
    let mut edges = Vec::with_capacity(declared);
    let mut seen = std::collections::HashSet::new();
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let toks: &[&str] = if toks.first() == Some(&"e") { &toks[1..] } else { &toks };
        if toks.len() != 2 {
            return Err(err(ln, ParseErrorKind::BadEdgeLine));
        }
        let mut uv = [0usize; 2];
        for (slot, tok) in uv.iter_mut().zip(toks) {
            let x = parse_int(tok, ln)?;
            if x < 1 || x as usize > n {
                return Err(err(ln, ParseErrorKind::VertexOutOfRange { vertex: x, num_vertices: n }));
            }
            *slot = x as usize - 1;
        }
        let [u, v] = uv;
        if u == v {
            return Err(err(ln, ParseErrorKind::SelfLoop(u + 1)));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(err(ln, ParseErrorKind::DuplicateEdge(key.0 + 1, key.1 + 1)));
        }
        edges.push(key);
    }
    if edges.len() != declared {
        return Err(err(hline, ParseErrorKind::CountMismatch { what: "edges", declared, found: edges.len() }));
    }
    Ok(Graph::new(n, edges).expect("validated edges"))
}

/// Canonical edge-list text: header, then sorted `u v` pairs (1-based).
pub fn emit_edges(graph: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p col {} {}", graph.num_vertices(), graph.num_edges()).unwrap();
    for &(u, v) in graph.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}
