//! The `.tg` text format.
//!
//! ```text
//! tg <directed|undirected> <n>
//! u v t1 t2 ...
//! ```
//!
//! One line per edge with ascending labels. `#` starts a comment; blank
//! lines are ignored. Serialization is canonical, so
//! `to_tg(&parse_tg(&to_tg(g))?) == to_tg(g)`.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::TemporalGraph;

/// Yields `(1-based line number, whitespace-separated fields)` for every line
/// with content after comment stripping.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

pub(crate) fn field<T: FromStr>(line: usize, what: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{raw}`")))
}

pub fn parse_tg(text: &str) -> Result<TemporalGraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `tg` header"))?;
    if header.len() != 3 || header[0] != "tg" {
        return Err(Error::parse(hline, "expected `tg <directed|undirected> <n>`"));
    }
    let directed = match header[1] {
        "directed" => true,
        "undirected" => false,
        other => {
            return Err(Error::parse(hline, format!("unknown orientation `{other}`")));
        }
    };
    let n: usize = field(hline, "node count", header[2])?;
    let mut specs = Vec::new();
    for (line, fields) in lines {
        if fields.len() < 2 {
            return Err(Error::parse(line, "expected `u v [labels...]`"));
        }
        let u: usize = field(line, "node", fields[0])?;
        let v: usize = field(line, "node", fields[1])?;
        let labels = fields[2..]
            .iter()
            .map(|raw| field::<u64>(line, "label", raw))
            .collect::<Result<Vec<_>>>()?;
        // Validate per line so errors carry the line number.
        TemporalGraph::build(n, directed, [(u, v, labels.clone())])
            .map_err(|e| Error::parse(line, e.to_string()))?;
        specs.push((u, v, labels));
    }
    TemporalGraph::build(n, directed, specs).map_err(|e| Error::parse(hline, e.to_string()))
}

pub fn to_tg(g: &TemporalGraph) -> String {
    let mut out = String::new();
    let orientation = if g.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(out, "tg {orientation} {}", g.node_count());
    for e in g.edges() {
        let _ = write!(out, "{} {}", e.u, e.v);
        for t in &e.labels {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# a path\ntg undirected 3\n\n0 1 1 3  # first\n1 2 2\n";
        let g = parse_tg(text).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.labels(1, 0), &[1, 3]);
        assert_eq!(to_tg(&g), "tg undirected 3\n0 1 1 3\n1 2 2\n");
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_tg("tg directed 2\n0 1 1\n0 x 2\n").unwrap_err();
        assert_eq!(err, Error::parse(3, "invalid node `x`"));
        let err = parse_tg("tg directed 2\n\n1 1 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(parse_tg(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_tg("tg sideways 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn keeps_unlabeled_edges() {
        let g = parse_tg("tg directed 2\n0 1\n").unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(to_tg(&g), "tg directed 2\n0 1\n");
    }

    fn arb_graph() -> impl Strategy<Value = TemporalGraph> {
        (2usize..7, any::<bool>()).prop_flat_map(|(n, directed)| {
            let edge = (0..n, 0..n, prop::collection::vec(1u64..1_000_000_000_000, 0..4));
            prop::collection::vec(edge, 0..12).prop_map(move |specs| {
                let specs: Vec<_> = specs.into_iter().filter(|(u, v, _)| u != v).collect();
                TemporalGraph::build(n, directed, specs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn tg_round_trip(g in arb_graph()) {
            let text = to_tg(&g);
            let back = parse_tg(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(to_tg(&back), text);
        }

        #[test]
        fn instances_cover_labeled_edges(g in arb_graph()) {
            let mut union = std::collections::BTreeSet::new();
            for t in g.distinct_times() {
                for e in g.instance(t) {
                    prop_assert!(g.edge_index(e.0, e.1).is_some());
                    union.insert(e);
                }
            }
            let labeled: std::collections::BTreeSet<_> = g.edges().iter()
                .filter(|e| !e.labels.is_empty()).map(|e| (e.u, e.v)).collect();
            prop_assert_eq!(union, labeled);
        }
    }
}
