//! Line-oriented text format for plumbing graphs.
//!
//! ```text
//! # E8
//! v 1 -2
//! e 1 2
//! a 1 K
//! ```
//!
//! Parsed graphs remember their source lines, so `serialize(parse(s)) == s`
//! byte for byte, comments and spacing included.

use super::{PlumbingGraph, Record};
use crate::error::{Error, Result};

/// Parses the text format, validating the tree structure.
pub fn parse_graph(text: &str) -> Result<PlumbingGraph> {
    let mut records = Vec::new();
    let body = text.strip_suffix('\n');
    let trailing_newline = body.is_some();
    let body = body.unwrap_or(text);
    if !body.is_empty() || trailing_newline {
        for (i, raw) in body.split('\n').enumerate() {
            records.push(parse_line(raw, i + 1)?);
        }
    }
    let g = PlumbingGraph { records, trailing_newline };
    g.validate_with_lines()?;
    Ok(g)
}

fn parse_line(raw: &str, line: usize) -> Result<(Record, Option<String>)> {
    let trimmed = raw.trim();
    let err = |msg: String| Error::GraphParse { line, msg };
    if trimmed.is_empty() {
        return Ok((Record::Blank, Some(raw.to_string())));
    }
    if trimmed.starts_with('#') {
        return Ok((Record::Comment(raw.to_string()), Some(raw.to_string())));
    }
    let toks: Vec<&str> = trimmed.split_whitespace().collect();
    let rec = match toks[0] {
        "v" => {
            if toks.len() != 3 {
                return Err(err(format!("expected `v <id> <euler>`, got {:?}", trimmed)));
            }
            let e: i64 = toks[2].parse().map_err(|_| err(format!("bad Euler number {:?}", toks[2])))?;
            Record::Vertex { id: toks[1].to_string(), euler: e }
        }
        "e" => {
            if toks.len() != 3 {
                return Err(err(format!("expected `e <id1> <id2>`, got {:?}", trimmed)));
            }
            Record::Edge { a: toks[1].to_string(), b: toks[2].to_string() }
        }
        "a" => {
            if toks.len() != 3 {
                return Err(err(format!("expected `a <id> <label>`, got {:?}", trimmed)));
            }
            Record::Arrow { id: toks[1].to_string(), label: toks[2].to_string() }
        }
        other => return Err(err(format!("unknown record type {:?}", other))),
    };
    Ok((rec, Some(raw.to_string())))
}

/// Writes the graph back; parsed lines are reproduced verbatim.
pub fn serialize_graph(g: &PlumbingGraph) -> String {
    let lines: Vec<String> = g
        .records
        .iter()
        .map(|(rec, raw)| match raw {
            Some(r) => r.clone(),
            None => match rec {
                Record::Vertex { id, euler } => format!("v {} {}", id, euler),
                Record::Edge { a, b } => format!("e {} {}", a, b),
                Record::Arrow { id, label } => format!("a {} {}", id, label),
                Record::Comment(c) => c.clone(),
                Record::Blank => String::new(),
            },
        })
        .collect();
    let mut s = lines.join("\n");
    if g.trailing_newline {
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E8: &str = "# E8 resolution graph\nv 0 -2\nv 1 -2\nv 2 -2\nv 3 -2\nv 4 -2\nv 5 -2\nv 6 -2\nv 7 -2\n\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 6\ne 4 7\n";

    #[test]
    fn e8_roundtrip() {
        let g = parse_graph(E8).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(serialize_graph(&g), E8);
    }

    #[test]
    fn odd_spacing_roundtrips() {
        let s = "v  a   -1\n  # note\r\nv b -2\ne a b\na a K";
        let g = parse_graph(s).unwrap();
        assert_eq!(serialize_graph(&g), s);
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_graph("v 1 -2\nv 2 x\n").unwrap_err();
        assert_eq!(e, Error::GraphParse { line: 2, msg: "bad Euler number \"x\"".into() });
        assert!(matches!(parse_graph("v 1 -2\nq\n"), Err(Error::GraphParse { line: 2, .. })));
        assert!(matches!(parse_graph("v 1 -2\ne 1 9\n"), Err(Error::GraphParse { line: 2, .. })));
        assert!(matches!(parse_graph("v 1 -2\nv 2 -2\n"), Err(Error::MalformedGraph(_))));
        assert!(matches!(parse_graph("v 1 -2\na 3 K\n"), Err(Error::GraphParse { line: 2, .. })));
    }

    #[test]
    fn built_graph_serializes_canonically() {
        let mut g = PlumbingGraph::new();
        g.add_vertex("x", -1);
        g.add_vertex("y", -3);
        g.add_edge("x", "y");
        g.add_arrow("x", "K");
        let s = serialize_graph(&g);
        assert_eq!(s, "v x -1\nv y -3\ne x y\na x K\n");
        assert_eq!(serialize_graph(&parse_graph(&s).unwrap()), s);
    }

    proptest! {
        #[test]
        fn chains_roundtrip(eulers in prop::collection::vec(-9i64..0, 1..12), comment in "[a-z ]{0,10}") {
            let mut s = format!("#{}\n", comment);
            for (i, e) in eulers.iter().enumerate() {
                s.push_str(&format!("v {} {}\n", i, e));
            }
            for i in 1..eulers.len() {
                s.push_str(&format!("e {} {}\n", i - 1, i));
            }
            let g = parse_graph(&s).unwrap();
            prop_assert_eq!(serialize_graph(&g), s);
        }
    }
}
