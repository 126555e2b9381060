//! The ring overlay graph: 2^n nodes on a physical cycle, plus shortcut
//! links placed by a divisibility rule.
//!
//! A node whose ID is divisible by 2^k holds a shortcut that skips 2^k
//! positions in either direction. Adjacency is decided by formula alone, so
//! the graph is never materialized and n up to 30 stays cheap.

use crate::error::{Error, Result};
use crate::graph::{AdjacencyView, Edge, VertexId};

pub const MAX_RING_LEVELS: u32 = 30;

/// Ring overlay on 2^n vertices. Immutable and stateless; adjacency is
/// computed on demand from the divisibility rule.
#[derive(Clone, Debug)]
pub struct RingTopology {
    n: u32,
}

impl RingTopology {
    /// Builds the overlay for 2^n vertices, 1 <= n <= 30.
    pub fn new(n: u32) -> Result<RingTopology> {
        if n == 0 || n > MAX_RING_LEVELS {
            return Err(Error::InvalidParameter(format!(
                "ring level count must be in 1..={MAX_RING_LEVELS}, got {n}"
            )));
        }
        Ok(RingTopology { n })
    }

    pub fn levels(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        1u64 << self.n
    }

    /// Exponent of the largest power of two dividing `v`; n for vertex 0.
    pub fn t_value(&self, v: VertexId) -> Result<u32> {
        self.check_vertex(v)?;
        Ok(if v.0 == 0 { self.n } else { v.0.trailing_zeros() })
    }

    /// 2^min(t(a), t(b)): the largest power of two dividing both IDs.
    pub fn gcdd_pow2(&self, a: VertexId, b: VertexId) -> Result<u64> {
        let ta = self.t_value(a)?;
        let tb = self.t_value(b)?;
        Ok(1u64 << ta.min(tb))
    }

    /// Whether `a` and `b` are linked: the cyclic gap between them, in either
    /// direction, equals the largest power of two dividing both IDs.
    pub fn adjacent(&self, a: VertexId, b: VertexId) -> Result<bool> {
        if a == b {
            return Err(Error::InvalidParameter(format!(
                "adjacency query needs two distinct vertices, got {a} twice"
            )));
        }
        let q = self.gcdd_pow2(a, b)?;
        let gap = (a.0 as u64).abs_diff(b.0 as u64);
        Ok(gap == q || self.modulus() - gap == q)
    }

    /// Wrapping step of `delta` positions from `v`.
    pub fn step(&self, v: VertexId, delta: i64) -> VertexId {
        let m = self.modulus() as i64;
        VertexId((((v.0 as i64 + delta) % m + m) % m) as u32)
    }

    /// Overlay level of an edge: the longest shortcuts get level 1, the
    /// physical cycle links level n.
    pub fn edge_level(&self, e: Edge) -> Result<u32> {
        let (u, v) = e.endpoints();
        if !self.adjacent(u, v)? {
            return Err(Error::NotAnEdge(u, v));
        }
        let q = self.gcdd_pow2(u, v)?;
        Ok(self.n - q.ilog2())
    }

    pub fn is_physical(&self, e: Edge) -> Result<bool> {
        Ok(self.edge_level(e)? == self.n)
    }

    /// All edges, materialized. Quadratic in nothing, but linear in
    /// n * 2^n, so callers should budget for large n themselves.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges = Vec::new();
        for id in 0..self.modulus() {
            let v = VertexId(id as u32);
            for w in self.neighbors(v) {
                if v < w {
                    edges.push(Edge::new(v, w));
                }
            }
        }
        edges
    }
}

impl AdjacencyView for RingTopology {
    fn vertex_count(&self) -> usize {
        self.modulus() as usize
    }

    /// {v +- 2^k : 0 <= k <= t(v)}, deduplicated and sorted.
    fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let t = self.t_value(v).expect("vertex in range");
        let mut out: Vec<VertexId> = (0..=t.min(self.n - 1))
            .flat_map(|k| {
                let d = 1i64 << k;
                [self.step(v, d), self.step(v, -d)]
            })
            .filter(|w| *w != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.adjacent(u, v).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distances, diameter};

    fn v(id: u32) -> VertexId {
        VertexId(id)
    }

    #[test]
    fn t_value_cases() {
        let ring = RingTopology::new(6).unwrap();
        assert_eq!(ring.t_value(v(0)).unwrap(), 6);
        assert_eq!(ring.t_value(v(12)).unwrap(), 2);
        assert_eq!(ring.t_value(v(37)).unwrap(), 0);
    }

    #[test]
    fn t_value_rejects_out_of_range() {
        let ring = RingTopology::new(3).unwrap();
        assert!(ring.t_value(v(8)).is_err());
    }

    #[test]
    fn gcdd_cases() {
        let ring = RingTopology::new(6).unwrap();
        assert_eq!(ring.gcdd_pow2(v(8), v(12)).unwrap(), 4);
        assert_eq!(ring.gcdd_pow2(v(0), v(0)).unwrap(), 64);
        let small = RingTopology::new(4).unwrap();
        assert_eq!(small.gcdd_pow2(v(1), v(2)).unwrap(), 1);
    }

    #[test]
    fn adjacency_cases() {
        let ring = RingTopology::new(4).unwrap();
        assert!(ring.adjacent(v(0), v(8)).unwrap());
        assert!(ring.adjacent(v(1), v(2)).unwrap());
        assert!(!ring.adjacent(v(1), v(3)).unwrap());
        assert!(ring.adjacent(v(0), v(15)).unwrap(), "wrap-around physical link");
        assert!(ring.adjacent(v(12), v(0)).unwrap(), "wrap-around shortcut");
        assert!(ring.adjacent(v(0), v(0)).is_err());
    }

    #[test]
    fn two_level_ring_is_cycle_plus_one_chord() {
        let ring = RingTopology::new(2).unwrap();
        assert_eq!(ring.vertex_count(), 4);
        let mut edges = ring.edges();
        edges.sort_unstable();
        let expect = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)];
        let expect: Vec<Edge> = expect.iter().map(|&(a, b)| Edge::new(v(a), v(b))).collect();
        assert_eq!(edges, expect);
    }

    #[test]
    fn one_level_ring_is_a_single_link() {
        let ring = RingTopology::new(1).unwrap();
        assert_eq!(ring.vertex_count(), 2);
        assert_eq!(ring.edges().len(), 1);
    }

    #[test]
    fn vertex_zero_neighbors() {
        let ring = RingTopology::new(4).unwrap();
        let ids: Vec<u32> = ring.neighbors(v(0)).iter().map(|w| w.0).collect();
        // +8 and -8 coincide, so seven distinct neighbors.
        assert_eq!(ids, vec![1, 2, 4, 8, 12, 14, 15]);
    }

    #[test]
    fn neighbor_enumeration_matches_adjacency_rule() {
        for n in 1..=6 {
            let ring = RingTopology::new(n).unwrap();
            let count = ring.vertex_count() as u32;
            for a in 0..count {
                let listed = ring.neighbors(v(a));
                for b in 0..count {
                    if a == b {
                        continue;
                    }
                    assert_eq!(
                        listed.contains(&v(b)),
                        ring.adjacent(v(a), v(b)).unwrap(),
                        "n={n} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn degrees_stay_within_twice_level_count() {
        for n in 1..=8 {
            let ring = RingTopology::new(n).unwrap();
            for id in 0..ring.vertex_count() as u32 {
                assert!(ring.neighbors(v(id)).len() <= 2 * n as usize);
            }
        }
    }

    #[test]
    fn physical_cycle_is_contained() {
        let ring = RingTopology::new(6).unwrap();
        let count = ring.vertex_count() as u32;
        for a in 0..count {
            let b = (a + 1) % count;
            assert!(ring.adjacent(v(a), v(b)).unwrap());
        }
    }

    #[test]
    fn even_subgraph_is_the_next_smaller_ring() {
        for n in 2..=10u32 {
            let big = RingTopology::new(n).unwrap();
            let small = RingTopology::new(n - 1).unwrap();
            let half = small.vertex_count() as u32;
            for a in 0..half {
                for b in (a + 1)..half {
                    assert_eq!(
                        big.contains_edge(v(2 * a), v(2 * b)),
                        small.contains_edge(v(a), v(b)),
                        "n={n} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn distances_scale_under_doubling() {
        for n in 2..=7u32 {
            let small = RingTopology::new(n).unwrap();
            let big = RingTopology::new(n + 1).unwrap();
            let count = small.vertex_count();
            let small_dist: Vec<Vec<Option<u32>>> = (0..count)
                .map(|s| bfs_distances(&small, v(s as u32)).unwrap())
                .collect();
            for a in 0..count {
                let big_dist = bfs_distances(&big, v(2 * a as u32)).unwrap();
                for b in 0..count {
                    assert_eq!(small_dist[a][b], big_dist[2 * b], "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn diameter_grows_by_at_most_two_per_level() {
        let mut prev = diameter(&RingTopology::new(1).unwrap()).unwrap();
        assert_eq!(prev, 1);
        for n in 2..=10u32 {
            let d = diameter(&RingTopology::new(n).unwrap()).unwrap();
            assert!(d <= prev + 2, "n={n} d={d} prev={prev}");
            assert!(d < 2 * n);
            prev = d;
        }
    }

    #[test]
    fn edge_levels() {
        let ring = RingTopology::new(4).unwrap();
        assert_eq!(ring.edge_level(Edge::new(v(0), v(8))).unwrap(), 1);
        assert_eq!(ring.edge_level(Edge::new(v(1), v(2))).unwrap(), 4);
        assert!(ring.is_physical(Edge::new(v(1), v(2))).unwrap());
        assert!(!ring.is_physical(Edge::new(v(0), v(8))).unwrap());
        assert!(ring.edge_level(Edge::new(v(1), v(3))).is_err());
    }

    #[test]
    fn level_bounds_are_enforced() {
        assert!(RingTopology::new(0).is_err());
        assert!(RingTopology::new(31).is_err());
        assert!(RingTopology::new(30).is_ok());
    }
}
