//! Single-use link ledger and the time-stepped schedulers that create and
//! restore entanglement.
//!
//! The timing model: creating a pair over a physical link takes one step, a
//! swap takes one step, each edge joins at most one operation per step, and
//! each node performs at most one swap per step. Creation may run on all
//! physical links concurrently.
//!
//! A swap consumes the pairs on its two input edges and produces a fresh
//! pair between the far endpoints. Within one step all swaps read the
//! step-start state, so a pair consumed by one swap may be rebuilt by
//! another in the same step; what is rejected is producing a pair on an edge
//! that would end the step holding two.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{Edge, VertexId};
use crate::topo::Topology;

/// Timing constants of the operation model, all one step; qubit lifetime is
/// unbounded. Named so alternative models have one place to start from.
pub mod timing {
    /// Steps to create a pair over a physical link.
    pub const CREATE: u64 = 1;
    /// Steps for an entanglement swap.
    pub const SWAP: u64 = 1;
    /// Steps for a measurement.
    pub const MEASURE: u64 = 1;
    /// Steps for classical coordination between any two nodes.
    pub const CLASSICAL: u64 = 1;
    /// Qubit lifetime; `None` models error correction holding state forever.
    pub const LIFETIME: Option<u64> = None;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkState {
    Entangled,
    Consumed,
}

/// Per-edge pair status for one topology, plus the step counter.
///
/// Stored as a baseline state with overrides, so a mostly-fresh or
/// mostly-entangled ledger over a large ring stays small. Single writer:
/// one step loop mutates it, readers snapshot between steps.
#[derive(Clone, Debug)]
pub struct EntanglementLedger<'g> {
    topo: &'g Topology,
    baseline: LinkState,
    overrides: HashMap<Edge, LinkState>,
    time: u64,
}

impl<'g> EntanglementLedger<'g> {
    /// All links down: nothing entangled yet.
    pub fn fresh(topo: &'g Topology) -> Self {
        EntanglementLedger { topo, baseline: LinkState::Consumed, overrides: HashMap::new(), time: 0 }
    }

    /// Every link of the topology carries a usable pair.
    pub fn fully_entangled(topo: &'g Topology) -> Self {
        EntanglementLedger { topo, baseline: LinkState::Entangled, overrides: HashMap::new(), time: 0 }
    }

    pub fn topology(&self) -> &'g Topology {
        self.topo
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn state(&self, e: Edge) -> Result<LinkState> {
        if !self.topo.contains(e) {
            let (u, v) = e.endpoints();
            return Err(Error::NotAnEdge(u, v));
        }
        Ok(self.overrides.get(&e).copied().unwrap_or(self.baseline))
    }

    pub fn is_entangled(&self, e: Edge) -> Result<bool> {
        Ok(self.state(e)? == LinkState::Entangled)
    }

    fn set(&mut self, e: Edge, s: LinkState) {
        if s == self.baseline {
            self.overrides.remove(&e);
        } else {
            self.overrides.insert(e, s);
        }
    }

    /// Uses up the pair on `e`. Errors name the edge; a missing pair is the
    /// collision signal under concurrent load.
    pub fn consume(&mut self, e: Edge) -> Result<()> {
        match self.state(e)? {
            LinkState::Entangled => {
                self.set(e, LinkState::Consumed);
                Ok(())
            }
            LinkState::Consumed => {
                let (u, v) = e.endpoints();
                Err(Error::MissingLink(u, v))
            }
        }
    }

    /// True when no link deviates from Entangled.
    pub fn all_entangled(&self) -> bool {
        match self.baseline {
            LinkState::Entangled => self.overrides.values().all(|&s| s == LinkState::Entangled),
            LinkState::Consumed => {
                // Against a fresh baseline every edge must be overridden.
                self.topo
                    .edges()
                    .into_iter()
                    .all(|e| self.overrides.get(&e) == Some(&LinkState::Entangled))
            }
        }
    }

    /// Edges currently without a pair, sorted. Enumerates the topology when
    /// the baseline itself is Consumed.
    pub fn consumed_edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = match self.baseline {
            LinkState::Entangled => self
                .overrides
                .iter()
                .filter(|&(_, &s)| s == LinkState::Consumed)
                .map(|(&e, _)| e)
                .collect(),
            LinkState::Consumed => self
                .topo
                .edges()
                .into_iter()
                .filter(|e| self.overrides.get(e) != Some(&LinkState::Entangled))
                .collect(),
        };
        out.sort_unstable();
        out
    }
}

/// An entanglement swap at `node`, joining the pairs on `left` and `right`
/// (both incident to `node`) into a pair between the far endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Swap {
    pub node: VertexId,
    pub left: Edge,
    pub right: Edge,
}

impl Swap {
    /// The edge whose pair this swap produces.
    pub fn produces(&self) -> Edge {
        Edge::new(self.left.other(self.node), self.right.other(self.node))
    }
}

/// Everything one time step does: pair creations on physical links and
/// swaps at nodes. Within the step all operations are simultaneous.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepPlan {
    pub creates: Vec<Edge>,
    pub swaps: Vec<Swap>,
}

impl StepPlan {
    pub fn is_empty(&self) -> bool {
        self.creates.is_empty() && self.swaps.is_empty()
    }

    fn canonicalize(&mut self) {
        self.creates.sort_unstable();
        self.swaps.sort_unstable_by_key(|s| s.node);
    }
}

/// An ordered list of step plans, each valid against the state left by its
/// predecessors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Timeline {
    pub steps: Vec<StepPlan>,
}

impl Timeline {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Validates `plan` against the current ledger state and applies it,
/// advancing time by one step. Rejections name the violated constraint and
/// leave the ledger untouched.
pub fn apply_step(ledger: &mut EntanglementLedger<'_>, plan: &StepPlan) -> Result<()> {
    let topo = ledger.topo;

    // operated = created or consumed this step; at most one per edge.
    let mut operated: HashSet<Edge> = HashSet::new();
    let mut produced: HashSet<Edge> = HashSet::new();
    let mut swapping_nodes: HashSet<VertexId> = HashSet::new();
    let mut consumed: Vec<Edge> = Vec::new();

    for &e in &plan.creates {
        if !topo.is_physical(e)? {
            return Err(Error::StepRejected(format!(
                "create on {e}, which is not a physical link"
            )));
        }
        if ledger.state(e)? == LinkState::Entangled {
            return Err(Error::StepRejected(format!("create on {e}, which already holds a pair")));
        }
        if !operated.insert(e) {
            return Err(Error::StepRejected(format!("edge {e} operated on twice in one step")));
        }
        if !produced.insert(e) {
            return Err(Error::StepRejected(format!("edge {e} produced twice in one step")));
        }
    }

    for swap in &plan.swaps {
        if !swapping_nodes.insert(swap.node) {
            return Err(Error::StepRejected(format!("node {} swaps twice in one step", swap.node)));
        }
        if !swap.left.touches(swap.node) || !swap.right.touches(swap.node) {
            return Err(Error::StepRejected(format!(
                "swap at {} over edges {} and {} not incident to it",
                swap.node, swap.left, swap.right
            )));
        }
        if swap.left == swap.right {
            return Err(Error::StepRejected(format!(
                "swap at {} lists the same edge twice",
                swap.node
            )));
        }
        for e in [swap.left, swap.right] {
            if !ledger.is_entangled(e)? {
                return Err(Error::StepRejected(format!(
                    "swap at {} needs a pair on {e}, which is down",
                    swap.node
                )));
            }
            if !operated.insert(e) {
                return Err(Error::StepRejected(format!("edge {e} operated on twice in one step")));
            }
            consumed.push(e);
        }
        let out = swap.produces();
        if !topo.contains(out) {
            let (u, v) = out.endpoints();
            return Err(Error::StepRejected(format!(
                "swap at {} would produce {u}-{v}, which is not an edge",
                swap.node
            )));
        }
        if !produced.insert(out) {
            return Err(Error::StepRejected(format!("edge {out} produced twice in one step")));
        }
    }

    // A produced pair must land on an edge that is empty by the end of the
    // step: either it was already down, or its old pair is consumed now.
    for &e in &produced {
        let consumed_now = consumed.contains(&e);
        if ledger.state(e)? == LinkState::Entangled && !consumed_now {
            return Err(Error::StepRejected(format!(
                "edge {e} would end the step holding two pairs"
            )));
        }
    }

    for e in consumed {
        ledger.set(e, LinkState::Consumed);
    }
    for e in produced {
        ledger.set(e, LinkState::Entangled);
    }
    ledger.time += 1;
    Ok(())
}

/// Marks every link of `path` consumed, atomically: either all its edges
/// held pairs and are now used up, or the ledger is unchanged and the first
/// missing link is reported. The resulting end-to-end pair is an accounting
/// event, not a topology edge.
pub fn consume_path(
    ledger: &mut EntanglementLedger<'_>,
    path: &crate::graph::Path,
) -> Result<Vec<Edge>> {
    let edges: Vec<Edge> = path.edges().collect();
    for &e in &edges {
        if !ledger.is_entangled(e)? {
            let (u, v) = e.endpoints();
            return Err(Error::MissingLink(u, v));
        }
    }
    for &e in &edges {
        ledger.set(e, LinkState::Consumed);
    }
    Ok(edges)
}

/// The swap cascade that rebuilds `targets` in one step.
///
/// Each target edge is produced by a swap at its midpoint vertex, which uses
/// up the midpoint's two links one layer up; those links are rebuilt by
/// their own midpoints in the same step, and so on until the physical layer,
/// whose consumed links are returned for the following creation step.
///
/// Where an edge has two midpoints (the ring's layer-0 edge) the smaller ID
/// swaps, so the pair is produced exactly once.
fn cascade(topo: &Topology, targets: &[Edge]) -> Result<(Vec<Swap>, Vec<Edge>)> {
    let top = topo.subdivision_count();
    let mut swaps = Vec::new();
    let mut to_create = Vec::new();
    let mut frontier: Vec<Edge> = targets.to_vec();
    frontier.sort_unstable();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in frontier {
            let mids = topo.midpoints_of(e)?;
            let mid = *mids.first().ok_or_else(|| {
                Error::Construction(format!("edge {e} has no midpoint to swap at"))
            })?;
            let (a, b) = e.endpoints();
            let (left, right) = (Edge::new(mid, a), Edge::new(mid, b));
            swaps.push(Swap { node: mid, left, right });
            for link in [left, right] {
                if topo.scheduler_layer(link)? == top {
                    to_create.push(link);
                } else {
                    next.push(link);
                }
            }
        }
        frontier = next;
    }
    to_create.sort_unstable();
    to_create.dedup();
    Ok((swaps, to_create))
}

/// Schedule that takes a graph with nothing entangled to fully entangled.
///
/// One creation round on all physical links, then for each layer from the
/// top down: a swap round building that layer while rebuilding every link
/// the swaps use up, and a creation round restoring the physical links the
/// cascade consumed. Runs in exactly 2k+1 steps for k subdivision layers.
/// The returned timeline is validated step by step before being returned.
pub fn bootstrap_schedule(topo: &Topology) -> Result<Timeline> {
    let top = topo.subdivision_count();
    let mut by_layer: Vec<Vec<Edge>> = vec![Vec::new(); top as usize + 1];
    for e in topo.edges() {
        by_layer[topo.scheduler_layer(e)? as usize].push(e);
    }
    for layer in &mut by_layer {
        layer.sort_unstable();
    }

    let mut steps = Vec::new();
    let mut first = StepPlan { creates: by_layer[top as usize].clone(), swaps: Vec::new() };
    first.canonicalize();
    steps.push(first);

    for layer in (0..top).rev() {
        let (swaps, to_create) = cascade(topo, &by_layer[layer as usize])?;
        let mut swap_step = StepPlan { creates: Vec::new(), swaps };
        swap_step.canonicalize();
        steps.push(swap_step);
        let mut create_step = StepPlan { creates: to_create, swaps: Vec::new() };
        create_step.canonicalize();
        steps.push(create_step);
    }

    let timeline = Timeline { steps };
    let mut probe = EntanglementLedger::fresh(topo);
    for step in &timeline.steps {
        apply_step(&mut probe, step)?;
    }
    if !probe.all_entangled() {
        return Err(Error::Construction(
            "bootstrap schedule did not entangle every link".into(),
        ));
    }
    Ok(timeline)
}

/// Schedule restoring the consumed edge set `S` on an otherwise fully
/// entangled ledger.
///
/// Edges are grouped by layer and restored from the highest layer down:
/// physical edges take one creation step, every other layer takes a swap
/// round plus a creation round. Descending order guarantees each cascade
/// only leans on links that are already up, and the whole schedule runs in
/// at most min(2|S|, 2k+1) steps. Validated against a copy of the ledger
/// before being returned.
pub fn replenish_schedule(ledger: &EntanglementLedger<'_>, consumed: &[Edge]) -> Result<Timeline> {
    let topo = ledger.topo;
    let mut groups: HashMap<u32, Vec<Edge>> = HashMap::new();
    let mut seen = HashSet::new();
    for &e in consumed {
        let layer = topo.scheduler_layer(e)?; // errors on non-edges
        if seen.insert(e) {
            groups.entry(layer).or_default().push(e);
        }
    }
    let down = ledger.consumed_edges();
    if down.len() != seen.len() || !down.iter().all(|e| seen.contains(e)) {
        return Err(Error::InvalidParameter(
            "ledger must be entangled everywhere except the given edges".into(),
        ));
    }

    let top = topo.subdivision_count();
    let mut layers: Vec<u32> = groups.keys().copied().collect();
    layers.sort_unstable_by(|a, b| b.cmp(a));

    let mut steps = Vec::new();
    for layer in layers {
        let mut edges = groups.remove(&layer).unwrap();
        edges.sort_unstable();
        if layer == top {
            let mut step = StepPlan { creates: edges, swaps: Vec::new() };
            step.canonicalize();
            steps.push(step);
        } else {
            let (swaps, to_create) = cascade(topo, &edges)?;
            let mut swap_step = StepPlan { creates: Vec::new(), swaps };
            swap_step.canonicalize();
            steps.push(swap_step);
            let mut create_step = StepPlan { creates: to_create, swaps: Vec::new() };
            create_step.canonicalize();
            steps.push(create_step);
        }
    }

    let timeline = Timeline { steps };
    let mut probe = ledger.clone();
    for step in &timeline.steps {
        apply_step(&mut probe, step)?;
    }
    if !probe.all_entangled() {
        return Err(Error::Construction(
            "replenish schedule left links down".into(),
        ));
    }
    Ok(timeline)
}
