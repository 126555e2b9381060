//! Types shared by the ring and sphere routers: requests, swap records and
//! full route traces against the entanglement ledger.

use crate::entangle::EntanglementLedger;
use crate::error::Result;
use crate::graph::{Edge, Path, VertexId};

/// A routing request as carried between nodes: who forwarded it (absent at
/// the origin) and where it must end up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RouteRequest {
    pub previous_sender: Option<VertexId>,
    pub destination: VertexId,
}

/// Entanglement swap performed at `node`, joining the links toward `left`
/// and `right` into one longer link.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwapEvent {
    pub node: VertexId,
    pub left: VertexId,
    pub right: VertexId,
}

/// Outcome of one routed request: the path taken and the swap performed at
/// each interior node, in path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteTrace {
    pub path: Path,
    pub swap_events: Vec<SwapEvent>,
}

/// Whether a route driver recomputes the next hop at every node (the wire
/// protocol) or reuses the path fragment it already computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HopMode {
    #[default]
    RecomputeEachHop,
    ReuseFragment,
}

/// Consumes the link used by one forward and records the swap at interior
/// nodes. Every forward uses up exactly the link it crosses, so a completed
/// route consumes exactly its path's edges.
pub(crate) fn forward_over(
    ledger: &mut EntanglementLedger<'_>,
    previous: Option<VertexId>,
    node: VertexId,
    next: VertexId,
    events: &mut Vec<SwapEvent>,
) -> Result<()> {
    ledger.consume(Edge::new(node, next))?;
    if let Some(prev) = previous {
        events.push(SwapEvent { node, left: prev, right: next });
    }
    Ok(())
}

/// Walks a precomputed path against the ledger: each hop uses up its link
/// and each interior node records its swap.
pub fn trace_along(path: Path, ledger: &mut EntanglementLedger<'_>) -> Result<RouteTrace> {
    let mut events = Vec::new();
    let hops = path.vertices().to_vec();
    for i in 0..hops.len().saturating_sub(1) {
        let previous = if i == 0 { None } else { Some(hops[i - 1]) };
        forward_over(ledger, previous, hops[i], hops[i + 1], &mut events)?;
    }
    Ok(RouteTrace { path, swap_events: events })
}
