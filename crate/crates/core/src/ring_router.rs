//! Shortest-path routing on the ring overlay.
//!
//! Every node can compute the whole shortest path from IDs alone: move the
//! endpoint with fewer factors of two one shortcut step toward the coarser
//! sub-ring, preferring the step that lands on the coarsest vertex, until the
//! endpoints are within two hops of each other.

use rand::seq::IndexedRandom;

use crate::entangle::EntanglementLedger;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyView, Path, VertexId};
use crate::ring::RingTopology;
use crate::routing::{forward_over, trace_along, HopMode, RouteRequest, RouteTrace, SwapEvent};
use crate::seed::{child_seed, rng_from, Rng};

/// The shortcut step from `a` that lands on the coarser vertex.
///
/// Of the two reachable vertices `a +- 2^t(a)`, the one divisible by a larger
/// power of two is always on a shortest path onward; on a tie the RNG picks.
/// The two candidates coincide exactly opposite the origin, where the tie is
/// between equal values.
pub fn best_move(a: VertexId, ring: &RingTopology, rng: &mut Rng) -> Result<VertexId> {
    let t = ring.t_value(a)?;
    let stride = 1i64 << t.min(ring.levels() - 1);
    let plus = ring.step(a, stride);
    let minus = ring.step(a, -stride);
    let (tp, tm) = (ring.t_value(plus)?, ring.t_value(minus)?);
    Ok(if tp > tm {
        plus
    } else if tm > tp {
        minus
    } else if plus == minus {
        plus
    } else {
        *[plus.min(minus), plus.max(minus)].choose(rng).unwrap()
    })
}

/// A shortest path of length at most 2 between distinct vertices, or `None`
/// if they are further apart.
///
/// Adjacency covers length 1; for length 2 only the two shortcut steps of
/// the endpoint with the smaller t-value can be midpoints.
pub fn path2(a: VertexId, b: VertexId, ring: &RingTopology) -> Result<Option<Path>> {
    if a == b {
        return Err(Error::InvalidParameter(format!(
            "two-hop search needs distinct vertices, got {a} twice"
        )));
    }
    if ring.adjacent(a, b)? {
        return Ok(Some(Path::new(vec![a, b])));
    }
    let (low, other) = if ring.t_value(a)? <= ring.t_value(b)? { (a, b) } else { (b, a) };
    let stride = 1i64 << ring.t_value(low)?;
    // Candidates in best_move preference order (coarser vertex first), so a
    // hop-by-hop recomputation retraces the exact same path.
    let mut mids = [ring.step(low, stride), ring.step(low, -stride)];
    if ring.t_value(mids[1])? > ring.t_value(mids[0])? {
        mids.swap(0, 1);
    }
    for mid in mids {
        if mid != other && mid != low && ring.adjacent(mid, other)? {
            return Ok(Some(Path::new(vec![a, mid, b])));
        }
    }
    Ok(None)
}

/// A shortest path from `a` to `b`.
///
/// `a == b` yields the single-vertex path. The RNG only breaks ties between
/// equally good shortcut steps, so the returned length is the true distance
/// for every seed.
pub fn ring_path(a: VertexId, b: VertexId, ring: &RingTopology, rng: &mut Rng) -> Result<Path> {
    ring.check_vertex(a)?;
    ring.check_vertex(b)?;
    if a == b {
        return Ok(Path::single(a));
    }
    if let Some(found) = path2(a, b, ring)? {
        return Ok(found);
    }
    if ring.t_value(a)? <= ring.t_value(b)? {
        let next = best_move(a, ring, rng)?;
        let tail = ring_path(next, b, ring, rng)?;
        Ok(tail.prepended(a))
    } else {
        let next = best_move(b, ring, rng)?;
        let mut head = ring_path(a, next, ring, rng)?;
        head.push(b);
        Ok(head)
    }
}

/// What a node does with an incoming request.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepAction {
    /// Destination reached; nothing to forward.
    Done,
    /// Forward the rewritten request to `next`.
    Forward { next: VertexId, request: RouteRequest },
}

/// One node's handling of a request: compute the next hop on a shortest
/// path, cross the link toward it (using it up), and swap at interior nodes.
///
/// Returns the action plus the swap performed, if any.
pub fn ring_route_step(
    request: RouteRequest,
    node: VertexId,
    ring: &RingTopology,
    ledger: &mut EntanglementLedger<'_>,
    rng: &mut Rng,
) -> Result<(StepAction, Option<SwapEvent>)> {
    ring.check_vertex(node)?;
    ring.check_vertex(request.destination)?;
    if node == request.destination {
        return Ok((StepAction::Done, None));
    }
    let path = ring_path(node, request.destination, ring, rng)?;
    let next = path.vertices()[1];
    let mut events = Vec::new();
    forward_over(ledger, request.previous_sender, node, next, &mut events)?;
    let forwarded = RouteRequest {
        previous_sender: Some(node),
        destination: request.destination,
    };
    Ok((StepAction::Forward { next, request: forwarded }, events.pop()))
}

/// Runs a whole route from `a` to `b`, step by step, against the ledger.
///
/// The per-route RNG is seeded from `(master_seed, a, b)` so concurrent
/// routes are independently reproducible. `HopMode::RecomputeEachHop` drives
/// [`ring_route_step`] at every node; `ReuseFragment` computes the path once
/// at the origin and walks it, which yields the identical trace because the
/// per-hop recomputation re-derives the same path tail.
pub fn drive_ring_route(
    a: VertexId,
    b: VertexId,
    ring: &RingTopology,
    ledger: &mut EntanglementLedger<'_>,
    master_seed: u64,
    mode: HopMode,
) -> Result<RouteTrace> {
    let mut rng = rng_from(child_seed(master_seed, a.0 as u64, b.0 as u64));
    match mode {
        HopMode::RecomputeEachHop => {
            let mut trace = RouteTrace { path: Path::single(a), swap_events: Vec::new() };
            let mut request = RouteRequest { previous_sender: None, destination: b };
            let mut node = a;
            loop {
                match ring_route_step(request, node, ring, ledger, &mut rng)? {
                    (StepAction::Done, _) => return Ok(trace),
                    (StepAction::Forward { next, request: fwd }, swap) => {
                        trace.path.push(next);
                        trace.swap_events.extend(swap);
                        request = fwd;
                        node = next;
                    }
                }
            }
        }
        HopMode::ReuseFragment => {
            let path = ring_path(a, b, ring, &mut rng)?;
            trace_along(path, ledger)
        }
    }
}

impl Path {
    pub(crate) fn prepended(self, v: VertexId) -> Path {
        let mut vertices = Vec::with_capacity(self.vertices().len() + 1);
        vertices.push(v);
        vertices.extend_from_slice(self.vertices());
        Path::new(vertices)
    }
}
