//! Hierarchical routing labels for the sphere overlay.
//!
//! A label is the chain of routing-preferred ancestors of a vertex down to
//! the base layer: entry 0 is the vertex itself, each following entry keeps
//! only the parents that a far-away router would pick (the lowest-layer
//! parent when layers differ, and among equal-layer parents those whose own
//! parents reach the lowest layer). Every entry has at most three vertices,
//! so the whole address is logarithmic in the network size, yet it is enough
//! to route to the vertex from anywhere.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{AdjacencyView, VertexId};
use crate::sphere::SphereTopology;

/// Ordered list of vertex-ID sets; `entries[0]` is the labelled vertex.
/// Within an entry, vertices are sorted by ID, so labels are canonical and
/// comparable byte for byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    entries: Vec<Vec<VertexId>>,
}

impl Label {
    pub fn entries(&self) -> &[Vec<VertexId>] {
        &self.entries
    }

    pub fn owner(&self) -> VertexId {
        self.entries[0][0]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // entries[0] always holds the labelled vertex
    }

    /// Index of the entry containing `v`, if any. A vertex can appear in at
    /// most one entry because entry layers strictly decrease.
    pub fn position_of(&self, v: VertexId) -> Option<usize> {
        self.entries.iter().position(|entry| entry.contains(&v))
    }

    pub fn all_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.entries.iter().flatten().copied()
    }

    /// Canonical text form: `{12}>{0,1}`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub(crate) fn from_entries(entries: Vec<Vec<VertexId>>) -> Label {
        Label { entries }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, entry) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ">")?;
            }
            write!(f, "{{")?;
            for (j, v) in entry.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Parents of the set that sit on the lowest layer among all parents.
/// Every member of `set` must itself have parents.
pub fn p_good(set: &[VertexId], g: &SphereTopology) -> Result<Vec<VertexId>> {
    let mut parents = BTreeSet::new();
    for &a in set {
        let (p1, p2) = g.parents(a).ok_or(Error::NoParents(a))?;
        parents.insert(p1);
        parents.insert(p2);
    }
    let min_layer = parents.iter().map(|&p| g.layer(p)).min().expect("set is nonempty");
    Ok(parents.into_iter().filter(|&p| g.layer(p) == min_layer).collect())
}

/// One label step: the lowest-layer parents of `set`, additionally dropping
/// those whose own parents miss the lowest grandparent layer. Candidates on
/// the base layer are returned unfiltered since they have no parents to
/// compare.
pub fn label_filter(set: &[VertexId], g: &SphereTopology) -> Result<Vec<VertexId>> {
    let candidates = p_good(set, g)?;
    // All candidates share one layer, so one representative decides.
    if g.layer(candidates[0]) == 0 {
        return Ok(candidates);
    }
    let preferred = p_good(&candidates, g)?;
    Ok(candidates
        .into_iter()
        .filter(|&c| {
            let (p1, p2) = g.parents(c).expect("candidate above base layer");
            preferred.contains(&p1) || preferred.contains(&p2)
        })
        .collect())
}

/// The full label of `v`: repeated filtering until the base layer appears.
pub fn build_label(v: VertexId, g: &SphereTopology) -> Label {
    let mut entries = vec![vec![v]];
    loop {
        let last = entries.last().unwrap();
        if g.layer(last[0]) == 0 {
            break;
        }
        let next = label_filter(last, g).expect("entries above the base layer have parents");
        assert!(!next.is_empty(), "label step from {last:?} produced no vertices");
        entries.push(next);
    }
    Label { entries }
}

pub fn compute_all(g: &SphereTopology) -> Vec<Label> {
    (0..g.vertex_count() as u32).map(|id| build_label(VertexId(id), g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_layer_labels_are_singletons() {
        let g = SphereTopology::build(2).unwrap();
        for vx in g.vertices().iter().filter(|vx| vx.layer == 0) {
            let label = g.label(vx.id);
            assert_eq!(label.entries(), &[vec![vx.id]]);
        }
    }

    #[test]
    fn layer_one_labels_keep_both_parents() {
        // Both parents of a layer-1 vertex are base-layer, so neither is
        // dropped and the label stops immediately.
        let g = SphereTopology::build(2).unwrap();
        for vx in g.vertices().iter().filter(|vx| vx.layer == 1) {
            let (p1, p2) = vx.parents.unwrap();
            let label = g.label(vx.id);
            assert_eq!(label.len(), 2);
            assert_eq!(label.entries()[1], vec![p1.min(p2), p1.max(p2)]);
        }
    }

    #[test]
    fn unequal_parent_layers_keep_only_the_lower_parent() {
        let g = SphereTopology::build(2).unwrap();
        let mut checked = 0;
        for vx in g.vertices().iter().filter(|vx| vx.layer == 2) {
            let (p1, p2) = vx.parents.unwrap();
            if g.layer(p1) == g.layer(p2) {
                continue;
            }
            let low = if g.layer(p1) < g.layer(p2) { p1 } else { p2 };
            assert_eq!(g.label(vx.id).entries()[1], vec![low]);
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn grandparent_tie_break_matches_direct_filtering() {
        // A layer-3 vertex whose parents tie on layer keeps exactly those
        // parents that reach the lowest grandparent layer.
        let g = SphereTopology::build(3).unwrap();
        let mut narrowed = 0;
        for vx in g.vertices().iter().filter(|vx| vx.layer == 3) {
            let (p1, p2) = vx.parents.unwrap();
            if g.layer(p1) != g.layer(p2) {
                continue;
            }
            let entry = &g.label(vx.id).entries()[1];
            let preferred = p_good(&[p1, p2], &g).unwrap();
            for &kept in entry {
                let (q1, q2) = g.parents(kept).unwrap();
                assert!(preferred.contains(&q1) || preferred.contains(&q2));
            }
            if entry.len() == 1 {
                narrowed += 1;
            }
        }
        assert!(narrowed > 0, "the grandparent check prunes somewhere at three layers");
    }

    #[test]
    fn filter_output_is_nonempty_and_small_everywhere() {
        let g = SphereTopology::build(3).unwrap();
        for id in 0..g.vertex_count() as u32 {
            let v = VertexId(id);
            if g.layer(v) == 0 {
                continue;
            }
            let out = label_filter(&[v], &g).unwrap();
            assert!(!out.is_empty());
            assert!(out.len() <= 3);
        }
    }

    #[test]
    fn p_good_rejects_base_layer_members() {
        let g = SphereTopology::build(1).unwrap();
        let base = g.vertices().iter().find(|vx| vx.layer == 0).unwrap().id;
        assert!(matches!(p_good(&[base], &g), Err(Error::NoParents(_))));
    }

    #[test]
    fn label_invariants_hold_for_every_vertex() {
        for k in 0..=3u32 {
            let g = SphereTopology::build(k).unwrap();
            for vx in g.vertices() {
                let label = g.label(vx.id);
                assert_eq!(label.owner(), vx.id);
                assert!(label.len() <= vx.layer as usize + 1);
                let mut prev_layer = None;
                for entry in label.entries() {
                    assert!(matches!(entry.len(), 1..=3), "entry sizes stay in 1..=3");
                    let layer = g.layer(entry[0]);
                    for pair in entry.windows(2) {
                        assert!(pair[0] < pair[1], "entries are sorted");
                    }
                    for (i, &a) in entry.iter().enumerate() {
                        assert_eq!(g.layer(a), layer, "entries are single-layer");
                        for &b in &entry[i + 1..] {
                            assert!(g.contains_edge(a, b), "entry vertices are adjacent");
                        }
                    }
                    if let Some(prev) = prev_layer {
                        assert!(layer < prev, "entry layers strictly decrease");
                    }
                    prev_layer = Some(layer);
                }
                assert_eq!(prev_layer, Some(0), "labels terminate on the base layer");
            }
        }
    }

    #[test]
    fn consecutive_entries_are_linked_by_parenthood() {
        let g = SphereTopology::build(3).unwrap();
        for vx in g.vertices() {
            let label = g.label(vx.id);
            // Every deeper entry vertex parents something in the entry
            // above it; local routing descends along these links.
            for w in label.entries().windows(2) {
                let (upper, lower) = (&w[0], &w[1]);
                for &p in lower {
                    let fathered = upper.iter().any(|&c| {
                        g.parents(c).is_some_and(|(c1, c2)| c1 == p || c2 == p)
                    });
                    assert!(fathered);
                }
            }
        }
    }

    #[test]
    fn rendering_is_canonical() {
        let g = SphereTopology::build(1).unwrap();
        let vx = g.vertices().iter().find(|vx| vx.layer == 1).unwrap();
        let (p1, p2) = vx.parents.unwrap();
        let (lo, hi) = (p1.min(p2), p1.max(p2));
        assert_eq!(g.label(vx.id).render(), format!("{{{}}}>{{{lo},{hi}}}", vx.id));
    }
}
