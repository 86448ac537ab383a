use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{BipartiteGraph, Graph};
use crate::error::{Error, Result};

/// Renders `"N M"` followed by one `"u v"` line per edge, `u < v`, in
/// lexicographic order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.num_edges() + 1));
    writeln!(out, "{} {}", g.num_vertices(), g.num_edges()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Renders `"Nt Nb M"` followed by one `"top bottom"` line per edge.
pub fn write_bipartite_edge_list(g: &BipartiteGraph) -> String {
    let mut out = String::with_capacity(16 * (g.num_edges() + 1));
    writeln!(out, "{} {} {}", g.num_top(), g.num_bottom(), g.num_edges()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

fn parse_fields<const K: usize>(line_no: usize, line: &str) -> Result<[usize; K]> {
    let mut out = [0usize; K];
    let mut fields = line.split_ascii_whitespace();
    for slot in out.iter_mut() {
        let tok = fields.next().ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("expected {K} integers, got {line:?}"),
        })?;
        *slot = tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("not a non-negative integer: {tok:?}"),
        })?;
    }
    if fields.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("expected {K} integers, got {line:?}"),
        });
    }
    Ok(out)
}

/// Header and body lines, 1-based, with a trailing empty line tolerated.
fn split_lines(text: &str) -> Result<(&str, Vec<(usize, &str)>)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let body: Vec<_> = lines.collect();
    Ok((header, body))
}

fn check_count(expected: usize, found: usize, last_line: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("header declares {expected} edges, found {found}"),
        });
    }
    Ok(())
}

fn offset_line(err: Error) -> Error {
    // Edge `i` (1-based) of the body sits on file line `i + 1`.
    match err {
        Error::OutOfRange { line, u, v } => Error::OutOfRange { line: line + 1, u, v },
        Error::DuplicateEdge { line, u, v } => Error::DuplicateEdge { line: line + 1, u, v },
        Error::Parse { line, msg } => Error::Parse { line: line + 1, msg },
        other => other,
    }
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    let (header, body) = split_lines(text)?;
    let [n, m] = parse_fields::<2>(1, header)?;
    let edges = body
        .iter()
        .map(|&(no, line)| parse_fields::<2>(no, line).map(|[u, v]| (u, v)))
        .collect::<Result<Vec<_>>>()?;
    check_count(m, edges.len(), body.len() + 1)?;
    Graph::from_edges(n, edges).map_err(offset_line)
}

pub fn read_bipartite_edge_list(text: &str) -> Result<BipartiteGraph> {
    let (header, body) = split_lines(text)?;
    let [nt, nb, m] = parse_fields::<3>(1, header)?;
    let edges = body
        .iter()
        .map(|&(no, line)| parse_fields::<2>(no, line).map(|[u, v]| (u, v)))
        .collect::<Result<Vec<_>>>()?;
    check_count(m, edges.len(), body.len() + 1)?;
    BipartiteGraph::from_edges(nt, nb, edges).map_err(offset_line)
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<Graph> {
    read_edge_list(&fs::read_to_string(path)?)
}

pub fn write_graph_file(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    Ok(fs::write(path, write_edge_list(g))?)
}

pub fn read_bipartite_file(path: impl AsRef<Path>) -> Result<BipartiteGraph> {
    read_bipartite_edge_list(&fs::read_to_string(path)?)
}

pub fn write_bipartite_file(path: impl AsRef<Path>, g: &BipartiteGraph) -> Result<()> {
    Ok(fs::write(path, write_bipartite_edge_list(g))?)
}
