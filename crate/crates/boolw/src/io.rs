//! Graph text formats.
//!
//! Native format: a header `n m` followed by `m` lines `u v` with 0-indexed
//! endpoints; `#`-prefixed lines are comments. DIMACS-style input (`p edge n m`
//! header, `e u v` 1-indexed, `c` comments) is accepted and converted.
//! [`write_graph`] emits the canonical native form: edges `u < v` in
//! lexicographic order, so parse → write is a canonicalizer.

use crate::graph::{Graph, GraphError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphParseError {
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: malformed header {text:?}")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: malformed edge {text:?}")]
    MalformedEdge { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("header declared {expected} edges, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
}

/// (1-based line number, trimmed text) for every non-comment, non-blank line.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with('c'))
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(GraphParseError::MissingHeader)?;
    let dimacs = header.starts_with('p');

    let (n, m) = parse_header(header_line, header, dimacs)?;
    let mut g = Graph::empty(n);
    let mut found = 0usize;
    for (lineno, line) in lines {
        let (u, v) = parse_edge(lineno, line, n, dimacs)?;
        found += 1;
        g.add_edge(u, v).map_err(|e| match e {
            GraphError::VertexOutOfRange(vertex, n) => {
                GraphParseError::VertexOutOfRange { line: lineno, vertex, n }
            }
            GraphError::SelfLoop(vertex) => GraphParseError::SelfLoop { line: lineno, vertex },
            GraphError::DuplicateEdge(u, v) => GraphParseError::DuplicateEdge { line: lineno, u, v },
        })?;
    }
    if found != m {
        return Err(GraphParseError::EdgeCountMismatch { expected: m, found });
    }
    Ok(g)
}

fn parse_header(line: usize, text: &str, dimacs: bool) -> Result<(usize, usize), GraphParseError> {
    let malformed = || GraphParseError::MalformedHeader { line, text: text.to_string() };
    let toks: Vec<&str> = text.split_whitespace().collect();
    let (ns, ms) = if dimacs {
        // "p edge n m"
        if toks.len() != 4 || toks[0] != "p" || toks[1] != "edge" {
            return Err(malformed());
        }
        (toks[2], toks[3])
    } else {
        if toks.len() != 2 {
            return Err(malformed());
        }
        (toks[0], toks[1])
    };
    let n = ns.parse().map_err(|_| malformed())?;
    let m = ms.parse().map_err(|_| malformed())?;
    Ok((n, m))
}

fn parse_edge(line: usize, text: &str, n: usize, dimacs: bool) -> Result<(usize, usize), GraphParseError> {
    let malformed = || GraphParseError::MalformedEdge { line, text: text.to_string() };
    let toks: Vec<&str> = text.split_whitespace().collect();
    let (us, vs) = if dimacs {
        if toks.len() != 3 || toks[0] != "e" {
            return Err(malformed());
        }
        (toks[1], toks[2])
    } else {
        if toks.len() != 2 {
            return Err(malformed());
        }
        (toks[0], toks[1])
    };
    let mut u: usize = us.parse().map_err(|_| malformed())?;
    let mut v: usize = vs.parse().map_err(|_| malformed())?;
    if dimacs {
        // DIMACS vertices are 1-indexed.
        if u == 0 || v == 0 {
            return Err(GraphParseError::VertexOutOfRange { line, vertex: 0, n });
        }
        u -= 1;
        v -= 1;
    }
    Ok((u, v))
}

pub fn write_graph(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", g.n(), edges.len()));
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
