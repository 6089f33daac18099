//! Plain-text edge lists.
//!
//! One `u v` pair per line. Lines starting with `#` are comments. An optional
//! `n=<count>` line fixes the vertex count; otherwise it is the largest id
//! plus one.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Raw parse result, before graph construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
    /// Comment lines with the leading `#` and surrounding whitespace removed.
    pub comments: Vec<String>,
}

pub fn parse_str(text: &str) -> Result<EdgeList> {
    parse_reader(text.as_bytes())
}

pub fn parse_reader<R: BufRead>(reader: R) -> Result<EdgeList> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut comments = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        if let Some(rest) = t.strip_prefix("n=") {
            if declared.is_some() {
                return Err(Error::Parse { line: lineno, msg: "duplicate n= header".into() });
            }
            let n = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("bad vertex count {rest:?}") })?;
            declared = Some(n);
            continue;
        }
        let mut it = t.split_whitespace();
        let mut next = |what: &str| -> Result<Vertex> {
            let tok = it
                .next()
                .ok_or_else(|| Error::Parse { line: lineno, msg: format!("missing {what} endpoint") })?;
            tok.parse()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("bad vertex id {tok:?}") })
        };
        let u = next("first")?;
        let v = next("second")?;
        if let Some(extra) = it.next() {
            return Err(Error::Parse { line: lineno, msg: format!("unexpected token {extra:?}") });
        }
        edges.push((u, v));
    }
    let inferred = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < inferred => {
            return Err(Error::input(format!("edge endpoint {} exceeds declared n={n}", inferred - 1)));
        }
        Some(n) => n,
        None => inferred,
    };
    Ok(EdgeList { n, edges, comments })
}

pub fn read_graph<R: BufRead>(reader: R) -> Result<Graph> {
    let el = parse_reader(reader)?;
    Graph::from_edges(el.n, &el.edges)
}

pub fn graph_from_str(text: &str) -> Result<Graph> {
    read_graph(text.as_bytes())
}

/// Writes `n=<count>`, the given comment lines, then edges with `u < v` in
/// lexicographic order.
pub fn write_graph<W: Write>(g: &Graph, comments: &[String], out: &mut W) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "n={}", g.n())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn graph_to_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &[], &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge lists are ASCII")
}
