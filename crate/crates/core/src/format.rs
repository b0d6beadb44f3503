//! Line-oriented text format for ribbon graphs.
//!
//! ```text
//! # comment
//! vertex <name> : <half-edge> <half-edge> ...
//! edge <name> : <half-edge> <half-edge>
//! ```
//!
//! Vertex rotations are listed counterclockwise.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{GraphError, ParseError};
use crate::ribbon_graph::RibbonGraph;

pub fn parse(text: &str) -> Result<RibbonGraph, ParseError> {
    let mut vertices: Vec<(String, Vec<usize>)> = Vec::new();
    let mut edges: Vec<(String, usize, usize)> = Vec::new();
    let mut vertex_line = HashMap::new();
    let mut edge_line = HashMap::new();
    let mut label_lines: HashMap<usize, Vec<usize>> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let syntax = |column: usize, message: String| ParseError::Syntax {
            line,
            column,
            message,
        };
        let Some(colon) = content.find(':') else {
            return Err(syntax(indent + 1, "expected `:` after the name".into()));
        };
        let head: Vec<&str> = content[..colon].split_whitespace().collect();
        let (keyword, name) = match head.as_slice() {
            [k, n] => (*k, n.to_string()),
            _ => {
                return Err(syntax(
                    indent + 1,
                    "expected `vertex <name> :` or `edge <name> :`".into(),
                ))
            }
        };
        let mut ids = Vec::new();
        let tail = &content[colon + 1..];
        let mut offset = colon + 1;
        for token in tail.split(' ') {
            if !token.trim().is_empty() {
                let trimmed = token.trim();
                let column = offset + token.find(trimmed).unwrap_or(0) + 1;
                let id = trimmed
                    .parse::<usize>()
                    .map_err(|_| syntax(column, format!("`{trimmed}` is not a half-edge id")))?;
                ids.push(id);
            }
            offset += token.len() + 1;
        }
        match keyword {
            "vertex" => {
                for &id in &ids {
                    label_lines.entry(id).or_default().push(line);
                }
                vertex_line.insert(name.clone(), line);
                vertices.push((name, ids));
            }
            "edge" => {
                let [a, b] = ids[..] else {
                    return Err(syntax(
                        colon + 2,
                        format!("edge `{name}` needs exactly two half-edges, found {}", ids.len()),
                    ));
                };
                edge_line.insert(name.clone(), line);
                edges.push((name, a, b));
            }
            other => {
                return Err(syntax(indent + 1, format!("unknown keyword `{other}`")));
            }
        }
    }

    RibbonGraph::from_parts(&vertices, &edges).map_err(|source| {
        let line = match &source {
            GraphError::DuplicateVertex(n) => vertex_line.get(n).copied(),
            GraphError::DuplicateEdge(n) | GraphError::LoopEdge { edge: n, .. } => {
                edge_line.get(n).copied()
            }
            GraphError::Disconnected(v) => vertex_line.get(v).copied(),
            GraphError::DuplicateHalfEdge(h) => {
                label_lines.get(h).and_then(|l| l.get(1)).copied()
            }
            GraphError::UnknownHalfEdge(h) | GraphError::BadInvolution { half_edge: h, .. } => {
                edges
                    .iter()
                    .filter(|(_, a, b)| a == h || b == h)
                    .nth(1)
                    .or_else(|| edges.iter().find(|(_, a, b)| a == h || b == h))
                    .and_then(|(n, _, _)| edge_line.get(n).copied())
                    .or_else(|| label_lines.get(h).and_then(|l| l.first()).copied())
            }
            _ => None,
        };
        match line {
            Some(line) => ParseError::Build { line, source },
            None => ParseError::Graph(source),
        }
    })
}

/// Serializes `g` so that [`parse`] reproduces it exactly.
pub fn to_text(g: &RibbonGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        let _ = write!(out, "vertex {} :", g.vertex_name(v));
        for &h in g.rotation(v) {
            let _ = write!(out, " {}", g.label(h));
        }
        out.push('\n');
    }
    for e in g.edges() {
        let [a, b] = g.edge_halves(e);
        let _ = writeln!(out, "edge {} : {} {}", g.edge_name(e), g.label(a), g.label(b));
    }
    out
}
