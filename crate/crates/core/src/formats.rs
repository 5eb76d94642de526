//! Readers and writers for the on-disk documents: DIMACS-like and JSON graphs,
//! and JSON documents for channels, distributions, cones and vectors.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::graphs::Graph;
use crate::rational::{parse_rational, QVec};

/// A malformed document. `line` is 1-based; 0 means the problem is not tied to a line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

/// Deserializes a JSON document, reporting the line of the first error.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::new(e.line(), e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// Reads `p <n> <m>` (or `p edge <n> <m>`) followed by `m` lines `e <u> <v>` with
/// 1-based vertices. Blank lines and lines starting with `c` are ignored.
pub fn parse_dimacs(text: &str) -> Result<Graph, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let number = |s: &str| -> Result<usize, FormatError> {
            s.parse::<usize>().map_err(|_| {
                FormatError::new(
                    line_no,
                    format!("expected a nonnegative integer, found {s:?}"),
                )
            })
        };
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(FormatError::new(line_no, "second problem line"));
                }
                let nums = match fields.len() {
                    3 => &fields[1..],
                    4 if fields[1] == "edge" || fields[1] == "col" => &fields[2..],
                    _ => return Err(FormatError::new(line_no, "expected \"p <n> <m>\"")),
                };
                let n = number(nums[0])?;
                if n == 0 {
                    return Err(FormatError::new(
                        line_no,
                        "a graph needs at least one vertex",
                    ));
                }
                header = Some((n, number(nums[1])?));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(FormatError::new(line_no, "edge before the problem line"));
                };
                if fields.len() != 3 {
                    return Err(FormatError::new(line_no, "expected \"e <u> <v>\""));
                }
                let (u, v) = (number(fields[1])?, number(fields[2])?);
                for w in [u, v] {
                    if w == 0 || w > n {
                        return Err(FormatError::new(
                            line_no,
                            format!("vertex {w} outside 1..={n}"),
                        ));
                    }
                }
                if u == v {
                    return Err(FormatError::new(
                        line_no,
                        format!("self-loop at vertex {u}"),
                    ));
                }
                edges.push((u - 1, v - 1));
            }
            other => {
                return Err(FormatError::new(
                    line_no,
                    format!("unknown line type {other:?}"),
                ))
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(FormatError::new(
            last_line.max(1),
            "missing problem line \"p <n> <m>\"",
        ));
    };
    if edges.len() != m {
        return Err(FormatError::new(
            last_line,
            format!("problem line declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, &edges).map_err(|e| FormatError::new(0, e.to_string()))
}

pub fn write_dimacs(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("p {} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        writeln!(s, "e {} {}", u + 1, v + 1).expect("writing to a string");
    }
    s
}

/// JSON adjacency document: `{"vertices": n, "adjacency": ["0110", ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: usize,
    pub adjacency: Vec<String>,
}

impl From<&Graph> for GraphDocument {
    fn from(g: &Graph) -> Self {
        GraphDocument {
            vertices: g.n(),
            adjacency: g.adjacency_strings(),
        }
    }
}

impl GraphDocument {
    pub fn to_graph(&self) -> Result<Graph, FormatError> {
        let n = self.vertices;
        if n == 0 {
            return Err(FormatError::new(0, "a graph needs at least one vertex"));
        }
        if self.adjacency.len() != n {
            return Err(FormatError::new(
                0,
                format!("{} adjacency rows for {n} vertices", self.adjacency.len()),
            ));
        }
        let rows: Vec<&[u8]> = self.adjacency.iter().map(|r| r.as_bytes()).collect();
        let mut edges = Vec::new();
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n || row.iter().any(|&c| c != b'0' && c != b'1') {
                return Err(FormatError::new(
                    0,
                    format!("row {u} must be {n} characters of 0 and 1"),
                ));
            }
            if row[u] == b'1' {
                return Err(FormatError::new(0, format!("self-loop at vertex {u}")));
            }
            for v in u + 1..n {
                if row[v] != rows[v][u] {
                    return Err(FormatError::new(
                        0,
                        format!("adjacency is not symmetric at ({u}, {v})"),
                    ));
                }
                if row[v] == b'1' {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).map_err(|e| FormatError::new(0, e.to_string()))
    }
}

/// Accepts either a JSON adjacency document or the DIMACS-like text format.
pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    if text.trim_start().starts_with('{') {
        parse_json::<GraphDocument>(text)?.to_graph()
    } else {
        parse_dimacs(text)
    }
}

/// A vector given inline as `"2,1/2,-3"` or as a JSON list of rational strings.
pub fn parse_vector(text: &str) -> Result<QVec, FormatError> {
    let t = text.trim();
    if t.starts_with('[') {
        let raw: Vec<String> = parse_json(t)?;
        return raw
            .iter()
            .map(|s| parse_rational(s).map_err(|e| FormatError::new(0, e.to_string())))
            .collect();
    }
    t.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| FormatError::new(0, e.to_string())))
        .collect()
}
