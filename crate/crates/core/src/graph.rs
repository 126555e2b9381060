//! Shared graph primitives: vertices, edges, paths, breadth-first search,
//! exact diameter and bounded neighborhoods.
//!
//! Every search here is deterministic: adjacency lists are sorted ascending
//! and BFS expands smaller vertex IDs first, so shortest-path tie-breaks are
//! reproducible across runs.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Identifier of a vertex, unique within one topology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for VertexId {
    fn from(id: u32) -> Self {
        VertexId(id)
    }
}

/// Undirected edge stored as a canonical (min, max) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: VertexId,
    b: VertexId,
}

impl Edge {
    /// Canonicalizes the endpoint order. Self-loops are not representable.
    pub fn new(u: VertexId, v: VertexId) -> Edge {
        assert_ne!(u, v, "self-loops are not valid edges");
        if u < v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }

    pub fn touches(self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint that is not `v`. Panics if `v` is not an endpoint.
    pub fn other(self, v: VertexId) -> VertexId {
        if self.a == v {
            self.b
        } else {
            assert_eq!(self.b, v, "vertex {v} is not an endpoint of {self}");
            self.a
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// A walk with no repeated vertices; consecutive vertices are adjacent in the
/// hosting graph. The length of a path is its hop count, one less than its
/// vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<VertexId>,
}

impl Path {
    pub fn new(vertices: Vec<VertexId>) -> Path {
        debug_assert!(!vertices.is_empty(), "a path has at least one vertex");
        Path { vertices }
    }

    pub fn single(v: VertexId) -> Path {
        Path { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of hops (edges), i.e. vertex count minus one.
    pub fn hops(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| Edge::new(w[0], w[1]))
    }

    /// Concatenates with `tail`, which must start where `self` ends.
    pub fn join(mut self, tail: Path) -> Path {
        assert_eq!(self.last(), tail.first(), "paths do not share an endpoint");
        self.vertices.extend_from_slice(&tail.vertices[1..]);
        Path { vertices: self.vertices }
    }

    pub fn push(&mut self, v: VertexId) {
        self.vertices.push(v);
    }

    /// Checks adjacency of consecutive vertices and absence of repeats.
    pub fn is_valid_in(&self, graph: &impl AdjacencyView) -> bool {
        let mut seen = std::collections::HashSet::new();
        for v in &self.vertices {
            if !seen.insert(*v) {
                return false;
            }
        }
        self.vertices
            .windows(2)
            .all(|w| graph.contains_edge(w[0], w[1]))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.vertices {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Read-only adjacency queries over an immutable graph.
///
/// `neighbors` must return vertices in ascending ID order; all searches in
/// this module rely on that for deterministic tie-breaking.
pub trait AdjacencyView {
    fn vertex_count(&self) -> usize;
    fn neighbors(&self, v: VertexId) -> Vec<VertexId>;
    fn contains_edge(&self, u: VertexId, v: VertexId) -> bool;

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.index() < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v, self.vertex_count()))
        }
    }
}

/// Vertex count above which exact all-pairs computations are refused.
pub const EXACT_DIAMETER_BUDGET: usize = 10_000;

/// BFS distances from `src` to every vertex; `None` marks unreachable ones.
pub fn bfs_distances(graph: &impl AdjacencyView, src: VertexId) -> Result<Vec<Option<u32>>> {
    graph.check_vertex(src)?;
    let mut dist = vec![None; graph.vertex_count()];
    dist[src.index()] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v.index()].unwrap();
        for w in graph.neighbors(v) {
            if dist[w.index()].is_none() {
                dist[w.index()] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// A shortest path from `src` to `dst`, or `None` if `dst` is unreachable.
///
/// Ties are broken by expanding smaller vertex IDs first, so the result is
/// the same on every run.
pub fn bfs_shortest_path(
    graph: &impl AdjacencyView,
    src: VertexId,
    dst: VertexId,
) -> Result<Option<Path>> {
    graph.check_vertex(src)?;
    graph.check_vertex(dst)?;
    if src == dst {
        return Ok(Some(Path::single(src)));
    }
    let mut pred: Vec<Option<VertexId>> = vec![None; graph.vertex_count()];
    let mut seen = vec![false; graph.vertex_count()];
    seen[src.index()] = true;
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        for w in graph.neighbors(v) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                pred[w.index()] = Some(v);
                if w == dst {
                    return Ok(Some(reconstruct(&pred, src, dst)));
                }
                queue.push_back(w);
            }
        }
    }
    Ok(None)
}

fn reconstruct(pred: &[Option<VertexId>], src: VertexId, dst: VertexId) -> Path {
    let mut vertices = vec![dst];
    let mut v = dst;
    while v != src {
        v = pred[v.index()].expect("predecessor chain is complete");
        vertices.push(v);
    }
    vertices.reverse();
    Path::new(vertices)
}

/// Exact diameter by all-pairs BFS.
///
/// Refuses graphs above [`EXACT_DIAMETER_BUDGET`] vertices rather than
/// silently sampling, and refuses disconnected graphs.
pub fn diameter(graph: &impl AdjacencyView) -> Result<u32> {
    let n = graph.vertex_count();
    if n > EXACT_DIAMETER_BUDGET {
        return Err(Error::OverBudget { actual: n, budget: EXACT_DIAMETER_BUDGET });
    }
    let mut max = 0;
    for v in 0..n {
        let ecc = eccentricity(graph, VertexId(v as u32))?;
        max = max.max(ecc);
    }
    Ok(max)
}

/// Largest BFS distance from `src`; errors if some vertex is unreachable.
pub fn eccentricity(graph: &impl AdjacencyView, src: VertexId) -> Result<u32> {
    let dist = bfs_distances(graph, src)?;
    let mut max = 0;
    for d in dist {
        match d {
            Some(d) => max = max.max(d),
            None => return Err(Error::Disconnected),
        }
    }
    Ok(max)
}

/// All vertices within `radius` hops of `center`, each annotated with one
/// shortest path from the center (deterministic tie-break).
#[derive(Clone, Debug)]
pub struct Neighborhood {
    center: VertexId,
    radius: u32,
    /// Sorted by vertex ID.
    members: Vec<(VertexId, Path)>,
}

impl Neighborhood {
    pub fn center(&self) -> VertexId {
        self.center
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search_by_key(&v, |(id, _)| *id).is_ok()
    }

    /// The stored shortest path from the center to `v`, if `v` is inside.
    pub fn path_to(&self, v: VertexId) -> Option<&Path> {
        self.members
            .binary_search_by_key(&v, |(id, _)| *id)
            .ok()
            .map(|i| &self.members[i].1)
    }

    pub fn distance_to(&self, v: VertexId) -> Option<usize> {
        self.path_to(v).map(Path::hops)
    }

    pub fn members(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members.iter().map(|(id, _)| *id)
    }
}

/// Breadth-first exploration of the ball of the given radius around `center`.
pub fn kth_neighborhood(
    graph: &impl AdjacencyView,
    center: VertexId,
    radius: u32,
) -> Result<Neighborhood> {
    graph.check_vertex(center)?;
    let mut pred: std::collections::HashMap<VertexId, VertexId> = Default::default();
    let mut dist: std::collections::HashMap<VertexId, u32> = Default::default();
    dist.insert(center, 0);
    let mut queue = VecDeque::from([center]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == radius {
            continue;
        }
        for w in graph.neighbors(v) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                pred.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    let mut members: Vec<(VertexId, Path)> = dist
        .keys()
        .map(|&v| {
            let mut vertices = vec![v];
            let mut cur = v;
            while let Some(&p) = pred.get(&cur) {
                vertices.push(p);
                cur = p;
            }
            vertices.reverse();
            (v, Path::new(vertices))
        })
        .collect();
    members.sort_by_key(|(id, _)| *id);
    Ok(Neighborhood { center, radius, members })
}
