//! Command plumbing shared by the `boolw` binary and the test suites.
//!
//! The experiment commands live in [`experiments`] as plain functions that
//! return their CSV text plus the summary numbers, so tests can run them
//! in-process and assert on the results instead of scraping output.

pub mod experiments;

use boolw::graph::Graph;
use boolw::tree::DecompositionTree;

/// Process exit codes. Help and version exit 0; anything the user got wrong
/// maps to a stable nonzero code so scripts can tell the failures apart.
pub mod exit_code {
    /// Unreadable or malformed input file.
    pub const PARSE: i32 = 2;
    /// The solve ran to completion and proved no feasible set exists.
    pub const INFEASIBLE: i32 = 3;
    /// An enumeration or class cap was exceeded.
    pub const CAP: i32 = 4;
    /// Inconsistent or out-of-range command-line configuration.
    pub const CONFIG: i32 = 5;
}

/// A failure destined for the user: a message and a process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> CliError {
        CliError { code: exit_code::PARSE, message: message.into() }
    }

    pub fn config(message: impl Into<String>) -> CliError {
        CliError { code: exit_code::CONFIG, message: message.into() }
    }

    pub fn infeasible(message: impl Into<String>) -> CliError {
        CliError { code: exit_code::INFEASIBLE, message: message.into() }
    }

    pub fn cap(message: impl Into<String>) -> CliError {
        CliError { code: exit_code::CAP, message: message.into() }
    }
}

pub fn read_graph_file(path: &str) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {path}: {e}")))?;
    boolw::io::parse_graph(&text).map_err(|e| CliError::parse(format!("{path}: {e}")))
}

pub fn read_tree_file(path: &str, g: &Graph) -> Result<DecompositionTree, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {path}: {e}")))?;
    let t = boolw::tree::parse_tree(text.trim())
        .map_err(|e| CliError::parse(format!("{path}: {e}")))?;
    if t.n() != g.n() {
        return Err(CliError::parse(format!(
            "{path}: tree has {} leaves but the graph has {} vertices",
            t.n(),
            g.n()
        )));
    }
    Ok(t)
}

/// Writes `text` to the file at `out`, or to stdout when `out` is `None`.
pub fn emit(out: Option<&str>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::parse(format!("cannot write {path}: {e}"))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::parse(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Parses a comma-separated vertex list such as `0,3,7` against a graph of
/// `n` vertices.
pub fn parse_vertex_list(text: &str, n: usize) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        let v: usize = tok
            .parse()
            .map_err(|_| CliError::config(format!("bad vertex id {tok:?} in --side")))?;
        if v >= n {
            return Err(CliError::config(format!(
                "vertex {v} out of range for a graph on {n} vertices"
            )));
        }
        out.push(v);
    }
    Ok(out)
}

/// Parses a comma-separated grid of vertex counts such as `16,20,24`.
pub fn parse_grid(text: &str) -> Result<Vec<usize>, CliError> {
    let mut grid = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        let v: usize = tok
            .parse()
            .map_err(|_| CliError::config(format!("bad grid entry {tok:?}")))?;
        grid.push(v);
    }
    if grid.is_empty() {
        return Err(CliError::config("empty n grid"));
    }
    Ok(grid)
}
