//! Plain-text digraph files.
//!
//! ```text
//! digraph <n>
//! roots <z> <w>      (optional)
//! <u> <v>            (one arc per line, 0-indexed)
//! ```
//!
//! Undirected simple graphs use the same layout with a `graph <n>` header and
//! one edge `u v` per line. Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;

use crate::digraph::{Digraph, RootedDigraph, Tournament};
use crate::error::{Error, Result};
use crate::host::SimpleGraph;

/// A parsed digraph file: the digraph and its roots line, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphFile {
    pub graph: Digraph,
    pub roots: Option<(usize, usize)>,
}

impl DigraphFile {
    pub fn into_rooted(self) -> Result<RootedDigraph> {
        let (z, w) = self
            .roots
            .ok_or_else(|| Error::Invalid("digraph file has no `roots` line".into()))?;
        RootedDigraph::new(self.graph, z, w)
    }

    pub fn into_tournament(self) -> Result<Tournament> {
        Tournament::new(self.graph)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_pair(line_no: usize, rest: &[&str]) -> Result<(usize, usize)> {
    if rest.len() != 2 {
        return Err(parse_err(line_no, format!("expected two integers, got {}", rest.len())));
    }
    let a = rest[0]
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad integer `{}`", rest[0])))?;
    let b = rest[1]
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad integer `{}`", rest[1])))?;
    Ok((a, b))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            None
        } else {
            Some((i + 1, l.split_whitespace().collect()))
        }
    })
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    keyword: &str,
) -> Result<usize> {
    let (no, toks) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if toks.len() != 2 || toks[0] != keyword {
        return Err(parse_err(no, format!("expected `{keyword} <n>` header")));
    }
    toks[1]
        .parse()
        .map_err(|_| parse_err(no, format!("bad vertex count `{}`", toks[1])))
}

pub fn parse_digraph(text: &str) -> Result<DigraphFile> {
    let mut lines = content_lines(text);
    let n = parse_header(&mut lines, "digraph")?;
    let mut g = Digraph::empty(n);
    let mut roots = None;
    for (no, toks) in lines {
        if toks[0] == "roots" {
            if roots.is_some() {
                return Err(parse_err(no, "duplicate `roots` line"));
            }
            roots = Some(parse_pair(no, &toks[1..])?);
            continue;
        }
        let (u, v) = parse_pair(no, &toks)?;
        g.add_arc(u, v).map_err(|e| parse_err(no, e.to_string()))?;
    }
    if let Some((z, w)) = roots {
        RootedDigraph::new(g.clone(), z, w).map_err(|e| parse_err(2, e.to_string()))?;
    }
    Ok(DigraphFile { graph: g, roots })
}

pub fn parse_tournament(text: &str) -> Result<Tournament> {
    parse_digraph(text)?.into_tournament()
}

pub fn write_digraph(g: &Digraph, roots: Option<(usize, usize)>) -> String {
    let mut s = String::with_capacity(16 + 8 * g.arc_count());
    writeln!(s, "digraph {}", g.n()).unwrap();
    if let Some((z, w)) = roots {
        writeln!(s, "roots {z} {w}").unwrap();
    }
    for (u, v) in g.arcs() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn write_rooted(r: &RootedDigraph) -> String {
    write_digraph(r.graph(), Some(r.roots()))
}

/// Parses an undirected edge list; accepts either a `graph <n>` or `digraph <n>` header.
pub fn parse_simple_graph(text: &str) -> Result<SimpleGraph> {
    let mut lines = content_lines(text).peekable();
    let keyword = match lines.peek() {
        Some((_, toks)) if toks.first() == Some(&"digraph") => "digraph",
        _ => "graph",
    };
    let n = parse_header(&mut lines, keyword)?;
    let mut edges = Vec::new();
    for (no, toks) in lines {
        let (u, v) = parse_pair(no, &toks)?;
        edges.push((u, v));
    }
    SimpleGraph::new(n, edges)
}

pub fn write_simple_graph(g: &SimpleGraph) -> String {
    let mut s = String::new();
    writeln!(s, "graph {}", g.n()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_with_roots() {
        let g = Digraph::from_arcs(4, [(0, 2), (2, 1), (3, 1)]).unwrap();
        let text = write_digraph(&g, Some((0, 1)));
        assert_eq!(text, "digraph 4\nroots 0 1\n0 2\n2 1\n3 1\n");
        let back = parse_digraph(&text).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.roots, Some((0, 1)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_digraph("").is_err());
        assert!(parse_digraph("graph 3\n").is_err());
        assert!(parse_digraph("digraph 2\n0 0\n").is_err());
        assert!(parse_digraph("digraph 2\n0 5\n").is_err());
        assert!(parse_digraph("digraph 2\nroots 1 1\n").is_err());
        assert!(parse_digraph("digraph 2\n0 x\n").is_err());
        assert!(parse_tournament("digraph 3\n0 1\n1 2\n").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let f = parse_digraph("# tri\ndigraph 3\n\n0 1\n1 2\n2 0\n").unwrap();
        assert!(f.into_tournament().is_ok());
    }

    #[test]
    fn simple_graph_roundtrip() {
        let g = parse_simple_graph("graph 3\n0 1\n2 1\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(parse_simple_graph(&write_simple_graph(&g)).unwrap(), g);
    }
}
