use super::Graph;
use crate::error::{Error, Result};
use std::fmt::Write as _;

/// Parses the plain edge-list format: a header `directed N` or
/// `undirected N`, then one `u v w` line per edge. Blank lines and lines
/// starting with `#` are skipped. A missing weight means 1.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    let mut parts = header.split_whitespace();
    let directed = match parts.next() {
        Some("directed") => true,
        Some("undirected") => false,
        other => {
            return Err(Error::Parse {
                line: hline,
                msg: format!("expected directed|undirected, found {other:?}"),
            })
        }
    };
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(Error::Parse { line: hline, msg: "missing vertex count".into() })?;

    let mut g = Graph::new(n, directed);
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse { line, msg: format!("expected `u v [w]`, found {l:?}") });
        }
        let num = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse { line, msg: format!("bad vertex {s:?}") })
        };
        let u = num(fields[0])?;
        let v = num(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s.parse().map_err(|_| Error::Parse { line, msg: format!("bad weight {s:?}") })?,
            None => 1.0,
        };
        g.add_edge(u, v, w).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = String::new();
    let kind = if g.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(s, "{kind} {}", g.n_vertices());
    for e in g.edges() {
        let _ = writeln!(s, "{} {} {}", e.u, e.v, e.w);
    }
    s
}
