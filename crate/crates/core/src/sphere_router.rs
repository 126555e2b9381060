//! Routing on the sphere overlay: a globally informed shortest-path
//! function and the label-driven local router that matches its lengths.
//!
//! Far apart, a router steps to the parent preferred by the layer rules;
//! within six hops a bounded search over the stored neighborhood finishes
//! the job. The local variant never looks at the graph as a whole: it works
//! from its own label, its own 6-hop neighborhood and the destination label.

use std::borrow::Cow;

use rand::seq::IndexedRandom;

use crate::entangle::EntanglementLedger;
use crate::error::{Error, Result};
use crate::graph::{kth_neighborhood, AdjacencyView, Neighborhood, Path, VertexId};
use crate::label::Label;
use crate::routing::{trace_along, HopMode, RouteTrace};
use crate::seed::{child_seed, rng_from, Rng};
use crate::sphere::SphereTopology;

/// Radius of the per-node bounded search.
pub const SEARCH_RADIUS: u32 = 6;

/// Source of per-vertex bounded neighborhoods: either one table built up
/// front (the stored-at-every-node reading) or recomputation per query (the
/// low-memory mode).
pub struct NeighborhoodSource {
    table: Option<Vec<Neighborhood>>,
}

impl NeighborhoodSource {
    pub fn precomputed(g: &SphereTopology) -> NeighborhoodSource {
        let table = (0..g.vertex_count() as u32)
            .map(|id| kth_neighborhood(g, VertexId(id), SEARCH_RADIUS).expect("vertex in range"))
            .collect();
        NeighborhoodSource { table: Some(table) }
    }

    pub fn on_demand() -> NeighborhoodSource {
        NeighborhoodSource { table: None }
    }

    pub fn ball<'a>(&'a self, g: &SphereTopology, v: VertexId) -> Cow<'a, Neighborhood> {
        match &self.table {
            Some(t) => Cow::Borrowed(&t[v.index()]),
            None => Cow::Owned(
                kth_neighborhood(g, v, SEARCH_RADIUS).expect("vertex in range"),
            ),
        }
    }

    /// Total stored ball entries; the per-node memory figure.
    pub fn stored_entries(&self) -> Option<usize> {
        self.table.as_ref().map(|t| t.iter().map(Neighborhood::len).sum())
    }
}

/// The parent to route through from `a` when the destination is far away.
///
/// A parent on a strictly lower layer wins. Between same-layer parents, the
/// one whose other grandparent sits strictly lowest wins. Otherwise both are
/// equally good and the RNG picks.
pub fn best_parent(a: VertexId, g: &SphereTopology, rng: &mut Rng) -> Result<VertexId> {
    let (p1, p2) = g.parents(a).ok_or(Error::NoParents(a))?;
    let (l1, l2) = (g.layer(p1), g.layer(p2));
    if l1 < l2 {
        return Ok(p1);
    }
    if l2 < l1 {
        return Ok(p2);
    }
    if l1 > 0 {
        // Same-layer parents share exactly one grandparent; compare the two
        // they do not share.
        let shared = g.common_parent(p1, p2)?;
        let own1 = other_parent(g, p1, shared);
        let own2 = other_parent(g, p2, shared);
        let (g1, gs, g2) = (g.layer(own1), g.layer(shared), g.layer(own2));
        if g1 < gs && g1 < g2 {
            return Ok(p1);
        }
        if g2 < gs && g2 < g1 {
            return Ok(p2);
        }
    }
    Ok(*[p1.min(p2), p1.max(p2)].choose(rng).unwrap())
}

fn other_parent(g: &SphereTopology, of: VertexId, not: VertexId) -> VertexId {
    let (a, b) = g.parents(of).expect("vertex above the base layer");
    if a == not {
        b
    } else {
        a
    }
}

/// A shortest path from `a` to `b` using global knowledge.
///
/// Within the search radius the stored neighborhood answers directly;
/// otherwise the endpoint on the higher layer descends to its preferred
/// parent and the search recurses. Any RNG seed yields an optimal length,
/// since tied parents are interchangeable.
pub fn global_path(
    a: VertexId,
    b: VertexId,
    g: &SphereTopology,
    balls: &NeighborhoodSource,
    rng: &mut Rng,
) -> Result<Path> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Ok(Path::single(a));
    }
    if let Some(p) = balls.ball(g, a).path_to(b) {
        return Ok(p.clone());
    }
    if g.layer(b) > g.layer(a) {
        let down = best_parent(b, g, rng)?;
        let mut head = global_path(a, down, g, balls, rng)?;
        head.push(b);
        Ok(head)
    } else {
        let down = best_parent(a, g, rng)?;
        let tail = global_path(down, b, g, balls, rng)?;
        Ok(tail.prepended(a))
    }
}

/// Everything a node is allowed to read when routing locally: its own ID,
/// its own label, its neighbor list and its bounded neighborhood, and
/// nothing else of the topology.
pub struct NodeView<'a> {
    pub id: VertexId,
    pub label: &'a Label,
    pub neighbors: Vec<VertexId>,
    pub ball: Cow<'a, Neighborhood>,
}

impl<'a> NodeView<'a> {
    pub fn of(g: &'a SphereTopology, balls: &'a NeighborhoodSource, v: VertexId) -> NodeView<'a> {
        NodeView { id: v, label: g.label(v), neighbors: g.neighbors(v), ball: balls.ball(g, v) }
    }
}

/// The move a local router makes toward the labelled destination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalStep {
    /// This node sits in the destination label: descend to one of its
    /// children in the next entry down.
    Descend(VertexId),
    /// Some label vertex is within the search radius: the bounded shortest
    /// path to the nearest one, usable as a multi-hop fragment.
    Approach(Path),
    /// Nothing nearby: climb to one of this node's own preferred parents.
    Climb(VertexId),
}

impl LocalStep {
    pub fn next_hop(&self) -> VertexId {
        match self {
            LocalStep::Descend(v) | LocalStep::Climb(v) => *v,
            LocalStep::Approach(p) => p.vertices()[1],
        }
    }
}

/// One local routing decision at `view` toward the vertex labelled `dest`.
///
/// Reads only the node's own data plus the destination label. Work outside
/// the stored neighborhood is proportional to the label lengths; the
/// returned count of label entries touched backs that up in tests.
pub fn local_next_hop(
    view: &NodeView<'_>,
    dest: &Label,
    rng: &mut Rng,
) -> Result<(LocalStep, usize)> {
    let mut entries_touched = 0;

    if let Some(i) = dest.position_of(view.id) {
        entries_touched += i + 1;
        debug_assert!(i > 0, "the labelled vertex itself is handled by the caller");
        let below = &dest.entries()[i - 1];
        let choices: Vec<VertexId> =
            below.iter().copied().filter(|c| view.neighbors.contains(c)).collect();
        let pick = choices.choose(rng).copied().ok_or_else(|| {
            Error::LabelStructure(format!(
                "node {} sits in the destination label but no child of entry {i} is adjacent",
                view.id
            ))
        })?;
        return Ok((LocalStep::Descend(pick), entries_touched + 1));
    }
    entries_touched += dest.len();

    // Best reachable label vertex within the bounded neighborhood. Reaching
    // entry i still costs i descent hops, so candidates are ranked by
    // distance plus entry index; remaining ties go to the smaller ID.
    let mut best: Option<(usize, usize, VertexId)> = None;
    for (i, entry) in dest.entries().iter().enumerate() {
        for &candidate in entry {
            if let Some(d) = view.ball.distance_to(candidate) {
                let key = (d + i, d, candidate);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
    }
    if let Some((_, _, target)) = best {
        let fragment = view.ball.path_to(target).expect("target inside the ball").clone();
        return Ok((LocalStep::Approach(fragment), entries_touched));
    }

    let own = view.label.entries().get(1).ok_or_else(|| {
        Error::LabelStructure(format!(
            "base-layer node {} found no label vertex within {SEARCH_RADIUS} hops",
            view.id
        ))
    })?;
    entries_touched += 1;
    Ok((LocalStep::Climb(*own.choose(rng).unwrap()), entries_touched))
}

/// A path from `a` to `b` computed hop by hop with local information only.
///
/// `HopMode::RecomputeEachHop` re-decides at every node; `ReuseFragment`
/// walks whole bounded-search fragments once found. Lengths match the
/// global router for either mode.
pub fn local_path(
    a: VertexId,
    b: VertexId,
    g: &SphereTopology,
    balls: &NeighborhoodSource,
    rng: &mut Rng,
    mode: HopMode,
) -> Result<Path> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    let dest = g.label(b);
    let mut path = Path::single(a);
    let mut current = a;
    // Generous bound: routes never exceed the diameter, 2k+3.
    let hop_budget = 4 * g.subdivisions() as usize + 8;
    while current != b {
        if path.hops() > hop_budget {
            return Err(Error::LabelStructure(format!(
                "local route {a}->{b} exceeded {hop_budget} hops"
            )));
        }
        let view = NodeView::of(g, balls, current);
        let (step, _) = local_next_hop(&view, dest, rng)?;
        match (step, mode) {
            (LocalStep::Approach(fragment), HopMode::ReuseFragment) => {
                for &v in &fragment.vertices()[1..] {
                    path.push(v);
                }
                current = path.last();
            }
            (step, _) => {
                let next = step.next_hop();
                path.push(next);
                current = next;
            }
        }
    }
    Ok(path)
}

/// Routes `a` to `b` locally against the ledger: every forward crosses and
/// uses up one link, and each interior node swaps its incoming and outgoing
/// links together. The per-route RNG derives from `(master_seed, a, b)`.
pub fn local_route(
    a: VertexId,
    b: VertexId,
    g: &SphereTopology,
    balls: &NeighborhoodSource,
    ledger: &mut EntanglementLedger<'_>,
    master_seed: u64,
    mode: HopMode,
) -> Result<RouteTrace> {
    let mut rng = rng_from(child_seed(master_seed, a.0 as u64, b.0 as u64));
    let path = local_path(a, b, g, balls, &mut rng, mode)?;
    trace_along(path, ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bfs_distances;
    use crate::topo::Topology;

    fn v(id: u32) -> VertexId {
        VertexId(id)
    }

    fn rng() -> Rng {
        rng_from(5)
    }

    #[test]
    fn lower_layer_parent_wins() {
        let g = SphereTopology::build(2).unwrap();
        let mut checked = 0;
        for vx in g.vertices() {
            let Some((p1, p2)) = vx.parents else { continue };
            if g.layer(p1) == g.layer(p2) {
                continue;
            }
            let low = if g.layer(p1) < g.layer(p2) { p1 } else { p2 };
            for seed in 0..5 {
                let mut rng = rng_from(seed);
                assert_eq!(best_parent(vx.id, &g, &mut rng).unwrap(), low);
            }
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn grandparent_rule_decides_parent_ties() {
        let g = SphereTopology::build(3).unwrap();
        let mut checked = 0;
        for vx in g.vertices() {
            let Some((p1, p2)) = vx.parents else { continue };
            if g.layer(p1) != g.layer(p2) || g.layer(p1) == 0 {
                continue;
            }
            let shared = g.common_parent(p1, p2).unwrap();
            let own1 = other_parent(&g, p1, shared);
            let own2 = other_parent(&g, p2, shared);
            let (l1, ls, l2) = (g.layer(own1), g.layer(shared), g.layer(own2));
            if l1 < ls && l1 < l2 {
                for seed in 0..5 {
                    let mut rng = rng_from(seed);
                    assert_eq!(best_parent(vx.id, &g, &mut rng).unwrap(), p1);
                }
                checked += 1;
            }
        }
        assert!(checked > 0, "the three-layer graph exercises the grandparent rule");
    }

    #[test]
    fn tied_parents_both_appear_over_many_draws() {
        let g = SphereTopology::build(2).unwrap();
        let tied = g
            .vertices()
            .iter()
            .find(|vx| {
                vx.parents.is_some_and(|(p1, p2)| {
                    g.layer(p1) == g.layer(p2) && g.layer(p1) == 0
                })
            })
            .expect("layer-1 vertices have base-layer parents");
        let (p1, p2) = tied.parents.unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut rng = rng_from(99);
        for _ in 0..1000 {
            seen.insert(best_parent(tied.id, &g, &mut rng).unwrap());
        }
        assert!(seen.contains(&p1) && seen.contains(&p2));
    }

    #[test]
    fn base_layer_vertices_have_no_parent_to_pick() {
        let g = SphereTopology::build(1).unwrap();
        let base = g.vertices().iter().find(|vx| vx.layer == 0).unwrap().id;
        assert!(matches!(best_parent(base, &g, &mut rng()), Err(Error::NoParents(_))));
    }

    #[test]
    fn adjacent_pairs_route_in_one_hop() {
        let g = SphereTopology::build(1).unwrap();
        let balls = NeighborhoodSource::precomputed(&g);
        let (e, _) = g.edges()[7];
        let (a, b) = e.endpoints();
        let p = global_path(a, b, &g, &balls, &mut rng()).unwrap();
        assert_eq!(p.hops(), 1);
        let p = local_path(a, b, &g, &balls, &mut rng(), HopMode::default()).unwrap();
        assert_eq!(p.hops(), 1);
    }

    #[test]
    fn global_and_local_lengths_match_distances_exhaustively() {
        let g = SphereTopology::build(1).unwrap();
        let balls = NeighborhoodSource::precomputed(&g);
        let n = g.vertex_count() as u32;
        for a in 0..n {
            let dist = bfs_distances(&g, v(a)).unwrap();
            for b in 0..n {
                if a == b {
                    continue;
                }
                let want = dist[b as usize].unwrap() as usize;
                for seed in [1u64, 2] {
                    let mut r = rng_from(seed);
                    let gp = global_path(v(a), v(b), &g, &balls, &mut r).unwrap();
                    assert!(gp.is_valid_in(&g));
                    assert_eq!(gp.hops(), want, "global {a}->{b}");
                    let mut r = rng_from(seed);
                    let lp = local_path(v(a), v(b), &g, &balls, &mut r, HopMode::default())
                        .unwrap();
                    assert!(lp.is_valid_in(&g));
                    assert_eq!(lp.hops(), want, "local {a}->{b}");
                }
            }
        }
    }

    #[test]
    fn fragment_mode_matches_per_hop_mode_lengths() {
        let g = SphereTopology::build(2).unwrap();
        let balls = NeighborhoodSource::precomputed(&g);
        let n = g.vertex_count() as u32;
        let mut r1 = rng_from(3);
        let mut r2 = rng_from(3);
        for (a, b) in [(0u32, 100), (17, 93), (42, 155), (1, 161)] {
            assert!(a < n && b < n);
            let slow =
                local_path(v(a), v(b), &g, &balls, &mut r1, HopMode::RecomputeEachHop).unwrap();
            let fast =
                local_path(v(a), v(b), &g, &balls, &mut r2, HopMode::ReuseFragment).unwrap();
            assert_eq!(slow.hops(), fast.hops());
        }
    }

    #[test]
    fn local_route_consumes_exactly_its_path() {
        let g = SphereTopology::build(2).unwrap();
        let balls = NeighborhoodSource::precomputed(&g);
        let topo = Topology::Sphere(g.clone());
        let mut ledger = EntanglementLedger::fully_entangled(&topo);
        let trace =
            local_route(v(3), v(140), &g, &balls, &mut ledger, 17, HopMode::default()).unwrap();
        assert_eq!(trace.swap_events.len(), trace.path.hops() - 1);
        let consumed = ledger.consumed_edges();
        let mut expected: Vec<_> = trace.path.edges().collect();
        expected.sort_unstable();
        assert_eq!(consumed, expected);
        // Re-routing the same pair with the same seed hits the missing link.
        let err = local_route(v(3), v(140), &g, &balls, &mut ledger, 17, HopMode::default());
        assert!(matches!(err, Err(Error::MissingLink(..))));
    }

    #[test]
    fn parent_step_cuts_the_distance_by_one_beyond_the_search_radius() {
        // Past the bounded search, stepping to the preferred parent of the
        // higher-layer endpoint always lands one hop closer, whichever way
        // the random fallback breaks ties.
        let g = SphereTopology::build(3).unwrap();
        let mut checked = 0;
        let mut draw = rng_from(606);
        let count = g.vertex_count() as u32;
        while checked < 300 {
            let a = rand::Rng::random_range(&mut draw, 0..count);
            let b = rand::Rng::random_range(&mut draw, 0..count);
            if a == b {
                continue;
            }
            let (high, other) = if g.layer(v(a)) >= g.layer(v(b)) { (a, b) } else { (b, a) };
            let from_high = bfs_distances(&g, v(high)).unwrap();
            let d = from_high[other as usize].unwrap();
            if d <= SEARCH_RADIUS {
                continue;
            }
            for seed in 0..3 {
                let mut r = rng_from(seed);
                let parent = best_parent(v(high), &g, &mut r).unwrap();
                let stepped = bfs_distances(&g, parent).unwrap()[other as usize].unwrap();
                assert_eq!(stepped, d - 1, "{high}->{other} via {parent}");
            }
            checked += 1;
        }
    }

    #[test]
    fn per_node_work_stays_within_the_stored_table_budget() {
        // Memory per node: the bounded neighborhood stays under the crude
        // degree-power bound. Work per decision outside that table: a few
        // label entries, proportional to the label length.
        let g = SphereTopology::build(3).unwrap();
        let k = g.subdivisions();
        let balls = NeighborhoodSource::precomputed(&g);
        let ball_budget = (6 * k as usize + 5).pow(6);
        for id in 0..g.vertex_count() as u32 {
            assert!(balls.ball(&g, v(id)).len() <= ball_budget);
        }
        let mut r = rng_from(8);
        let mut worst = 0usize;
        for (a, b) in [(0u32, 600), (313, 17), (77, 505), (641, 2)] {
            let dest = g.label(v(b));
            let mut current = v(a);
            while current != v(b) {
                let view = NodeView::of(&g, &balls, current);
                let (step, touched) = local_next_hop(&view, dest, &mut r).unwrap();
                worst = worst.max(touched);
                current = step.next_hop();
            }
        }
        // Labels hold at most k+1 entries; a decision reads the destination
        // label, possibly one own entry, and a constant more.
        assert!(worst <= 2 * (k as usize + 1) + 2, "worst decision touched {worst}");
    }

    #[test]
    fn descend_step_reaches_the_destination_from_its_label_parent() {
        let g = SphereTopology::build(2).unwrap();
        let balls = NeighborhoodSource::precomputed(&g);
        // Pick a destination whose label has at least two entries and stand
        // on a label vertex one entry up.
        let dest = g.vertices().iter().find(|vx| vx.layer == 2).unwrap().id;
        let label = g.label(dest).clone();
        let start = label.entries()[1][0];
        let view = NodeView::of(&g, &balls, start);
        let (step, _) = local_next_hop(&view, &label, &mut rng()).unwrap();
        match step {
            LocalStep::Descend(next) => {
                assert!(label.entries()[0].contains(&next));
                assert_eq!(next, dest);
            }
            other => panic!("expected a descent, got {other:?}"),
        }
    }

    #[test]
    fn far_node_climbs_its_own_label() {
        // Up to four subdivisions every destination label keeps a vertex
        // within six hops of anywhere, so the climb branch first fires on
        // the five-subdivision graph. The pair below is one such case;
        // construction is deterministic, so it stays one.
        let g = SphereTopology::build(5).unwrap();
        let (a, b) = (v(10002), v(3));
        let dist = bfs_distances(&g, a).unwrap();
        assert!(
            g.label(b).all_vertices().all(|lv| dist[lv.index()].unwrap() > SEARCH_RADIUS),
            "the chosen pair is far from the whole destination label"
        );
        let balls = NeighborhoodSource::on_demand();
        let view = NodeView::of(&g, &balls, a);
        let (step, _) = local_next_hop(&view, g.label(b), &mut rng()).unwrap();
        match step {
            LocalStep::Climb(p) => assert!(g.label(a).entries()[1].contains(&p)),
            other => panic!("expected a climb, got {other:?}"),
        }
        // And the full route from there still meets the true distance.
        let mut r = rng_from(41);
        let path = local_path(a, b, &g, &balls, &mut r, HopMode::default()).unwrap();
        assert_eq!(path.hops() as u32, dist[b.index()].unwrap());
        assert!(path.is_valid_in(&g));
    }
}
