//! The Euler graph of a label string and brute-force perfect matchings.
//!
//! Nodes are the labels `1..=m`; edge `p` joins the labels of tour positions `p` and
//! `p + 1` of the closed tour `1, ..., m, ell(1), ..., ell(n), 1`. A set of edges is a
//! set of cyclically adjacent position pairs, which is how a perfect matching becomes a
//! completely labeled Gale string.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::gale::LabeledGalePolytope;
use crate::game::Label;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerGraph {
    nodes: usize,
    /// Edge `p` (zero-based) joins tour positions `p` and `p + 1 mod f`.
    edges: Vec<(Label, Label)>,
}

impl EulerGraph {
    pub fn new(poly: &LabeledGalePolytope) -> Self {
        let tour = poly.position_labels();
        let f = tour.len();
        let edges = (0..f).map(|p| (tour[p], tour[(p + 1) % f])).collect();
        Self { nodes: poly.m(), edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(Label, Label)] {
        &self.edges
    }

    /// Degree of each node `1..=m`, loops counting twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes];
        for &(a, b) in &self.edges {
            deg[a - 1] += 1;
            deg[b - 1] += 1;
        }
        deg
    }

    /// Positions `p, p + 1` covered by a matching, as a bitstring of length `f`.
    pub fn matching_to_bits(&self, matching: &[usize]) -> BitString {
        let f = self.edges.len();
        BitString::from_positions(f, matching.iter().flat_map(|&p| [p, (p + 1) % f]))
    }
}

/// All loop-free perfect matchings, each a sorted list of zero-based edge indices.
/// Fails once more than `limit` matchings have been found.
pub fn euler_matchings(poly: &LabeledGalePolytope, limit: usize) -> Result<Vec<Vec<usize>>> {
    let graph = EulerGraph::new(poly);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); graph.nodes + 1];
    for (p, &(a, b)) in graph.edges.iter().enumerate() {
        if a != b {
            incident[a].push(p);
            incident[b].push(p);
        }
    }
    let mut covered = vec![false; graph.nodes + 1];
    let mut current = Vec::new();
    let mut out = Vec::new();
    search(&graph, &incident, &mut covered, &mut current, &mut out, limit)?;
    for m in &mut out {
        m.sort_unstable();
    }
    out.sort();
    Ok(out)
}

fn search(
    graph: &EulerGraph,
    incident: &[Vec<usize>],
    covered: &mut [bool],
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) -> Result<()> {
    let Some(node) = (1..=graph.nodes).find(|&v| !covered[v]) else {
        if out.len() == limit {
            return Err(Error::BudgetExceeded(format!("more than {limit} perfect matchings")));
        }
        out.push(current.clone());
        return Ok(());
    };
    covered[node] = true;
    for &e in &incident[node] {
        let (a, b) = graph.edges[e];
        let other = if a == node { b } else { a };
        if covered[other] {
            continue;
        }
        covered[other] = true;
        current.push(e);
        search(graph, incident, covered, current, out, limit)?;
        current.pop();
        covered[other] = false;
    }
    covered[node] = false;
    Ok(())
}
