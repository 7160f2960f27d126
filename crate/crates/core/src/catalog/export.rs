//! DOT and JSON-lines renderings of trimming graphs. Nodes without edges
//! are left out.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::trim::graph::TrimmingGraph;

#[derive(Serialize)]
struct EdgeLine<'a> {
    from: &'a str,
    from_dim: usize,
    to: &'a str,
    to_dim: usize,
}

/// DOT digraph with one rank per dimension, highest dimension on top.
pub fn graph_to_dot(g: &TrimmingGraph) -> String {
    let mut out = String::from("digraph trimming {\n");
    let shown = g.connected_nodes();
    if !shown.is_empty() {
        out.push_str("  rankdir=TB;\n  node [shape=box];\n");
    }
    let mut by_dim: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &shown {
        by_dim.entry(g.nodes[i].dim).or_default().push(i);
    }
    for (dim, nodes) in by_dim.iter().rev() {
        let _ = writeln!(out, "  subgraph dim{dim} {{\n    rank=same;");
        for &i in nodes {
            let node = &g.nodes[i];
            let id = node.id();
            let _ = writeln!(out, "    \"{id}\" [label=\"{dim}: {}\"];", &id[..8]);
        }
        out.push_str("  }\n");
    }
    for &(a, b) in &g.edges {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", g.nodes[a].id(), g.nodes[b].id());
    }
    out.push_str("}\n");
    out
}

/// One `{"from", "from_dim", "to", "to_dim"}` object per edge.
pub fn graph_to_jsonl(g: &TrimmingGraph) -> String {
    let mut out = String::new();
    for &(a, b) in &g.edges {
        let (fa, fb) = (g.nodes[a].id(), g.nodes[b].id());
        let line = EdgeLine { from: &fa, from_dim: g.nodes[a].dim, to: &fb, to_dim: g.nodes[b].dim };
        out.push_str(&serde_json::to_string(&line).expect("plain struct serializes"));
        out.push('\n');
    }
    out
}
