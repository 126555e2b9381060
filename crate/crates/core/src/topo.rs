//! A unified view over the two overlay families.
//!
//! The ring is treated as a subdivision hierarchy just like the sphere: the
//! two-vertex overlay is layer 0 and each halving of the stride adds a
//! layer, so a ring with 2^n vertices has n-1 subdivision layers. This gives
//! schedulers and the simulator one vocabulary for both graphs.

use crate::error::{Error, Result};
use crate::graph::{AdjacencyView, Edge, VertexId};
use crate::ring::RingTopology;
use crate::sphere::SphereTopology;

#[derive(Clone, Debug)]
pub enum Topology {
    Ring(RingTopology),
    Sphere(SphereTopology),
}

impl Topology {
    pub fn kind(&self) -> &'static str {
        match self {
            Topology::Ring(_) => "ring",
            Topology::Sphere(_) => "sphere",
        }
    }

    /// Number of subdivision iterations behind the graph: k for the sphere,
    /// n-1 for the ring.
    pub fn subdivision_count(&self) -> u32 {
        match self {
            Topology::Ring(r) => r.levels() - 1,
            Topology::Sphere(s) => s.subdivisions(),
        }
    }

    pub fn contains(&self, e: Edge) -> bool {
        let (u, v) = e.endpoints();
        match self {
            Topology::Ring(r) => r.contains_edge(u, v),
            Topology::Sphere(s) => s.contains_edge(u, v),
        }
    }

    /// Simulator-facing level of an edge: the creation layer on the sphere;
    /// on the ring, n - log2(gcdd), so the longest shortcut is level 1 and
    /// physical links are level n.
    pub fn edge_level(&self, e: Edge) -> Result<u32> {
        match self {
            Topology::Ring(r) => r.edge_level(e),
            Topology::Sphere(s) => s.edge_layer(e),
        }
    }

    /// Scheduler-facing layer in 0..=subdivision_count for both families.
    /// Sphere edges keep their creation layer; ring levels shift down by one.
    pub fn scheduler_layer(&self, e: Edge) -> Result<u32> {
        match self {
            Topology::Ring(r) => Ok(r.edge_level(e)? - 1),
            Topology::Sphere(s) => s.edge_layer(e),
        }
    }

    /// Physical links: the only edges where fresh entanglement is created.
    pub fn is_physical(&self, e: Edge) -> Result<bool> {
        Ok(self.scheduler_layer(e)? == self.subdivision_count())
    }

    /// All edges, materialized and sorted. Linear in the edge count, which
    /// for the ring means callers budget for n * 2^n.
    pub fn edges(&self) -> Vec<Edge> {
        match self {
            Topology::Ring(r) => r.edges(),
            Topology::Sphere(s) => s.edges().iter().map(|&(e, _)| e).collect(),
        }
    }

    /// The vertices that subdivided `e`, ascending. Exactly one everywhere
    /// except the ring's layer-0 edge, whose two arcs both have midpoints;
    /// physical edges have none.
    pub fn midpoints_of(&self, e: Edge) -> Result<Vec<VertexId>> {
        match self {
            Topology::Sphere(s) => {
                s.edge_layer(e)?;
                Ok(s.midpoint_of(e).into_iter().collect())
            }
            Topology::Ring(r) => {
                let (u, v) = e.endpoints();
                let q = r.gcdd_pow2(u, v)?;
                if !r.adjacent(u, v)? {
                    return Err(Error::NotAnEdge(u, v));
                }
                if q == 1 {
                    return Ok(Vec::new());
                }
                let half = (q / 2) as i64;
                let modulus = r.modulus();
                let gap = (u.0 as u64).abs_diff(v.0 as u64);
                let mut mids = if gap == q && modulus - gap == q {
                    // The layer-0 edge between the origin and its antipode:
                    // both arcs carry a midpoint.
                    vec![r.step(u.min(v), half), r.step(u.max(v), half)]
                } else if gap == q {
                    vec![r.step(u.min(v), half)]
                } else {
                    // Wrap-around arc.
                    vec![r.step(u.max(v), half)]
                };
                mids.sort_unstable();
                Ok(mids)
            }
        }
    }

    /// The two subdivision parents of `v`; `None` on layer 0.
    pub fn parents(&self, v: VertexId) -> Option<(VertexId, VertexId)> {
        match self {
            Topology::Sphere(s) => s.parents(v),
            Topology::Ring(r) => {
                let t = r.t_value(v).ok()?;
                if t >= r.levels() - 1 {
                    return None; // layer 0: the origin and its antipode
                }
                let a = r.step(v, 1i64 << t);
                let b = r.step(v, -(1i64 << t));
                Some((a.min(b), a.max(b)))
            }
        }
    }

    /// Subdivision layer of a vertex, 0..=subdivision_count.
    pub fn vertex_layer(&self, v: VertexId) -> Result<u32> {
        match self {
            Topology::Sphere(s) => {
                s.check_vertex(v)?;
                Ok(s.layer(v))
            }
            Topology::Ring(r) => {
                let t = r.t_value(v)?;
                Ok((r.levels() - 1).saturating_sub(t))
            }
        }
    }
}

impl AdjacencyView for Topology {
    fn vertex_count(&self) -> usize {
        match self {
            Topology::Ring(r) => r.vertex_count(),
            Topology::Sphere(s) => s.vertex_count(),
        }
    }

    fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        match self {
            Topology::Ring(r) => r.neighbors(v),
            Topology::Sphere(s) => s.neighbors(v),
        }
    }

    fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        match self {
            Topology::Ring(r) => r.contains_edge(u, v),
            Topology::Sphere(s) => s.contains_edge(u, v),
        }
    }
}
