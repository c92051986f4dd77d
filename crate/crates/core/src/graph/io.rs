//! Edge-list text format.
//!
//! ```text
//! # comment
//! n m
//! u v        (m lines, 0 <= u < v < n)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored anywhere.

use std::fmt::Write;

use super::{Graph, MAX_VERTICES};
use crate::{Error, Result};

fn fields(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let parse = |tok: &str| {
        tok.parse::<usize>()
            .map_err(|_| Error::Parse { line: lineno, message: format!("`{tok}` is not a non-negative integer") })
    };
    let mut toks = line.split_whitespace();
    match (toks.next(), toks.next(), toks.next()) {
        (Some(a), Some(b), None) => Ok((parse(a)?, parse(b)?)),
        _ => Err(Error::Parse { line: lineno, message: "expected exactly two integers".into() }),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lineno, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing `n m` header".into() })?;
    let (n, m) = fields(header, lineno)?;
    if n > MAX_VERTICES {
        return Err(Error::Validation(format!("vertex count {n} exceeds {MAX_VERTICES}")));
    }
    let mut g = Graph::empty(n);
    let mut seen = 0;
    for (lineno, line) in lines {
        let (u, v) = fields(line, lineno)?;
        if seen == m {
            return Err(Error::Validation(format!("line {lineno}: more than the declared {m} edges")));
        }
        if u >= v {
            return Err(Error::Validation(format!("line {lineno}: edge {u} {v} must satisfy u < v")));
        }
        if v >= n {
            return Err(Error::Validation(format!("line {lineno}: vertex {v} out of range for n = {n}")));
        }
        if !g.add_edge(u, v)? {
            return Err(Error::Validation(format!("line {lineno}: duplicate edge {u} {v}")));
        }
        seen += 1;
    }
    if seen != m {
        return Err(Error::Validation(format!("declared {m} edges, found {seen}")));
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_graph("2 1\n0 1\n").unwrap(), Graph::complete(2));
        assert_eq!(parse_graph("3 0\n").unwrap(), Graph::empty(3));
        let g = parse_graph("# a path\n\n3 2\n0 1\n# middle\n1 2\n").unwrap();
        assert_eq!(g, Graph::path(3));
    }

    #[test]
    fn rejects_bad_input() {
        let dup = parse_graph("3 2\n0 1\n0 1\n").unwrap_err();
        assert!(matches!(dup, Error::Validation(ref m) if m.contains("duplicate")), "{dup}");
        assert!(matches!(parse_graph("3 1\n1 0\n"), Err(Error::Validation(_))));
        assert!(matches!(parse_graph("3 1\n1 1\n"), Err(Error::Validation(_))));
        assert!(matches!(parse_graph("3 1\n0 3\n"), Err(Error::Validation(_))));
        assert!(matches!(parse_graph("3 2\n0 1\n"), Err(Error::Validation(_))));
        assert!(matches!(parse_graph("3 1\n0 1\n1 2\n"), Err(Error::Validation(_))));
        assert_eq!(
            parse_graph("3 1\n0 x\n").unwrap_err(),
            Error::Parse { line: 2, message: "`x` is not a non-negative integer".into() }
        );
        assert!(matches!(parse_graph("3 1 4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("# only\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn writes_format() {
        assert_eq!(write_graph(&Graph::path(3)), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn round_trip_all_small_graphs() {
        for n in 1..=6 {
            for g in crate::graph::enumerate_graphs(n, false, true).unwrap() {
                assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
            }
        }
    }
}
