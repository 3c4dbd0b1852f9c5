//! Pivot paths shared by the geometric and the combinatorial engines.

use std::collections::HashSet;
use std::hash::Hash;
use std::io::Write;

use serde::Serialize;

use crate::game::Label;

/// Which polytope a pivot moved in. Single-polytope paths use `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    P,
    Q,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::P => Side::Q,
            Side::Q => Side::P,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotStep<V> {
    pub side: Side,
    pub dropped: Label,
    pub picked: Label,
    /// Vertex reached by this pivot.
    pub vertex: V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Equilibrium,
    Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotPath<V> {
    pub missing_label: Label,
    pub start: V,
    pub steps: Vec<PivotStep<V>>,
    pub endpoint: Endpoint,
}

impl<V> PivotPath<V> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Start vertex followed by the vertex of every step.
    pub fn vertices(&self) -> impl Iterator<Item = &V> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.vertex))
    }

    pub fn label_sequence(&self) -> Vec<(Label, Label)> {
        self.steps.iter().map(|s| (s.dropped, s.picked)).collect()
    }

    /// The path drops the missing label first and terminates by picking it up.
    pub fn starts_and_ends_with_missing_label(&self) -> bool {
        match (self.steps.first(), self.steps.last()) {
            (Some(first), Some(last)) => first.dropped == self.missing_label && last.picked == self.missing_label,
            _ => false,
        }
    }

    /// Every picked-up label other than the last is the next dropped label.
    pub fn labels_chain(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].picked == w[1].dropped && w[0].picked != self.missing_label)
    }
}

impl<V: Hash + Eq> PivotPath<V> {
    pub fn has_repeated_vertex(&self) -> bool {
        let mut seen = HashSet::new();
        !self.vertices().all(|v| seen.insert(v))
    }
}

/// Identifiers written to the `basis` column of a path dump.
pub trait PathVertex {
    fn basis_ids(&self, side: Side) -> Vec<usize>;
}

#[derive(Serialize)]
struct PathRow<'a> {
    step: usize,
    dropped_label: Label,
    picked_label: Label,
    polytope: Side,
    basis: &'a str,
}

/// CSV with columns `step, dropped_label, picked_label, polytope, basis`.
pub fn write_path_csv<V: PathVertex, W: Write>(path: &PivotPath<V>, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (i, s) in path.steps.iter().enumerate() {
        let ids: Vec<String> = s.vertex.basis_ids(s.side).iter().map(ToString::to_string).collect();
        w.serialize(PathRow {
            step: i + 1,
            dropped_label: s.dropped,
            picked_label: s.picked,
            polytope: s.side,
            basis: &ids.join(";"),
        })?;
    }
    w.flush()?;
    Ok(())
}
