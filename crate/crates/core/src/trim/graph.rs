//! Trimming graphs: nodes are signature classes of the input functions,
//! with an edge from a node in dimension `k` to a node in dimension `k-1`
//! whenever some APN trim of the former has the latter's signature.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ortho::InvariantSignature;
use crate::trim::apn_trims;
use crate::vbf::Vbf;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphNode {
    pub dim: usize,
    pub signature: InvariantSignature,
    /// Labels of every input function that landed on this node. More than
    /// one label means several inputs share a signature; they may or may
    /// not be EA-equivalent.
    pub members: Vec<String>,
}

impl GraphNode {
    pub fn id(&self) -> String {
        self.signature.hash_hex()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrimmingGraph {
    /// Sorted by `(dim, hash)`.
    pub nodes: Vec<GraphNode>,
    /// Index pairs `(from, to)` into `nodes`, sorted.
    pub edges: BTreeSet<(usize, usize)>,
}

impl TrimmingGraph {
    /// Nodes touching at least one edge.
    pub fn connected_nodes(&self) -> Vec<usize> {
        let touched: BTreeSet<usize> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        touched.into_iter().collect()
    }

    /// Nodes that merged more than one input function.
    pub fn merged_nodes(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes.iter().filter(|n| n.members.len() > 1)
    }

    pub fn find(&self, dim: usize, signature: &InvariantSignature) -> Option<usize> {
        self.nodes.iter().position(|n| n.dim == dim && &n.signature == signature)
    }
}

/// Builds the graph over labelled APN functions. Only the input functions
/// become nodes; trims are matched against them by signature.
pub fn trimming_graph(functions: &[(String, Vbf)], exec: Exec) -> Result<TrimmingGraph> {
    let mut classes: BTreeMap<(usize, InvariantSignature), (Vec<String>, usize)> = BTreeMap::new();
    for (k, (label, f)) in functions.iter().enumerate() {
        if !f.is_apn()? {
            return Err(Error::Usage(format!("graph input {label} is not APN")));
        }
        let sig = InvariantSignature::of(f)?;
        classes.entry((f.n(), sig)).or_insert_with(|| (Vec::new(), k)).0.push(label.clone());
    }
    let mut keyed: Vec<_> = classes.into_iter().collect();
    keyed.sort_by(|a, b| (a.0 .0, a.0 .1.hash64(), &a.0 .1).cmp(&(b.0 .0, b.0 .1.hash64(), &b.0 .1)));

    let nodes: Vec<GraphNode> = keyed
        .iter()
        .map(|((dim, sig), (members, _))| GraphNode { dim: *dim, signature: sig.clone(), members: members.clone() })
        .collect();
    let lookup: BTreeMap<(usize, &InvariantSignature), usize> =
        nodes.iter().enumerate().map(|(i, n)| ((n.dim, &n.signature), i)).collect();

    let mut edges = BTreeSet::new();
    for (from, (_, (_, rep))) in keyed.iter().enumerate() {
        let f = &functions[*rep].1;
        if f.n() < 3 || !lookup.keys().any(|&(d, _)| d + 1 == f.n()) {
            continue;
        }
        for t in apn_trims(f, exec)? {
            if let Some(&to) = lookup.get(&(f.n() - 1, &t.signature)) {
                edges.insert((from, to));
            }
        }
    }
    Ok(TrimmingGraph { nodes, edges })
}
