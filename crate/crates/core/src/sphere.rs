//! Sphere overlay graph built by iterated edge subdivision of the
//! icosahedron.
//!
//! Each subdivision places a midpoint vertex on every newest-layer edge and
//! connects it to the edge's endpoints (its parents) and to the four
//! surrounding midpoints. Edges of earlier layers are retained as
//! long-distance links, so the final graph holds one layer of physical links
//! plus a hierarchy of shortcuts.
//!
//! The construction is purely combinatorial; 3D coordinates are carried
//! along for export and never consulted by any algorithm.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{AdjacencyView, Edge, VertexId};
use crate::label::{self, Label};

pub type Layer = u32;

pub const MAX_SUBDIVISIONS: u32 = 6;

#[derive(Clone, Debug)]
pub struct SphereVertex {
    pub id: VertexId,
    pub layer: Layer,
    /// Endpoints of the edge this vertex subdivided; absent on layer 0.
    /// Stored with the smaller ID first.
    pub parents: Option<(VertexId, VertexId)>,
    /// Unit-sphere position, for export only.
    pub coords: [f64; 3],
}

#[derive(Clone, Debug)]
pub struct SphereTopology {
    k: u32,
    vertices: Vec<SphereVertex>,
    /// Sorted by canonical edge; the layer records the subdivision iteration
    /// that created the edge.
    edges: Vec<(Edge, Layer)>,
    edge_layers: HashMap<Edge, Layer>,
    /// Midpoint vertex of each subdivided edge.
    midpoints: HashMap<Edge, VertexId>,
    adjacency: Vec<Vec<VertexId>>,
    labels: Vec<Label>,
}

impl SphereTopology {
    /// The base graph: 12 vertices, 30 edges, 5-regular, all on layer 0.
    pub fn icosahedron() -> SphereTopology {
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let raw: [[f64; 3]; 12] = [
            [-1.0, phi, 0.0],
            [1.0, phi, 0.0],
            [-1.0, -phi, 0.0],
            [1.0, -phi, 0.0],
            [0.0, -1.0, phi],
            [0.0, 1.0, phi],
            [0.0, -1.0, -phi],
            [0.0, 1.0, -phi],
            [phi, 0.0, -1.0],
            [phi, 0.0, 1.0],
            [-phi, 0.0, -1.0],
            [-phi, 0.0, 1.0],
        ];
        let faces: [[u32; 3]; 20] = [
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        let vertices: Vec<SphereVertex> = raw
            .iter()
            .enumerate()
            .map(|(id, c)| SphereVertex {
                id: VertexId(id as u32),
                layer: 0,
                parents: None,
                coords: normalize(*c),
            })
            .collect();
        let mut edge_set = BTreeSet::new();
        for f in faces {
            edge_set.insert(Edge::new(VertexId(f[0]), VertexId(f[1])));
            edge_set.insert(Edge::new(VertexId(f[1]), VertexId(f[2])));
            edge_set.insert(Edge::new(VertexId(f[2]), VertexId(f[0])));
        }
        let edges: Vec<(Edge, Layer)> = edge_set.into_iter().map(|e| (e, 0)).collect();
        let mut topo = SphereTopology {
            k: 0,
            vertices,
            edge_layers: edges.iter().map(|&(e, l)| (e, l)).collect(),
            edges,
            midpoints: HashMap::new(),
            adjacency: Vec::new(),
            labels: Vec::new(),
        };
        topo.rebuild_indexes();
        topo.labels = label::compute_all(&topo);
        topo
    }

    /// One subdivision pass: a midpoint on every newest-layer edge, linked to
    /// its two parents and its four neighboring midpoints.
    pub fn subdivide_once(&self) -> Result<SphereTopology> {
        let level = self.k;
        let newest: Vec<Edge> = self
            .edges
            .iter()
            .filter(|&&(_, l)| l == level)
            .map(|&(e, _)| e)
            .collect();

        // Midpoint IDs are assigned in ascending order of the sorted parent
        // pair, which `newest` already is. This keeps generated graphs
        // identical across runs.
        let mut vertices = self.vertices.clone();
        let mut midpoints = BTreeMap::new();
        for &e in &newest {
            let (a, b) = e.endpoints();
            let id = VertexId(vertices.len() as u32);
            vertices.push(SphereVertex {
                id,
                layer: level + 1,
                parents: Some((a, b)),
                coords: normalize(midpoint(
                    self.vertices[a.index()].coords,
                    self.vertices[b.index()].coords,
                )),
            });
            midpoints.insert(e, id);
        }

        let mut new_edges = BTreeSet::new();
        for (&e, &mid) in &midpoints {
            let (b1, b2) = e.endpoints();
            new_edges.insert(Edge::new(mid, b1));
            new_edges.insert(Edge::new(mid, b2));

            // The two vertices completing the triangles on either side of e
            // in the newest-layer mesh. When the endpoints sit on different
            // layers, older common neighbors must be filtered out.
            let same_layer = self.layer(b1) == self.layer(b2);
            let flank: Vec<VertexId> = self
                .common_neighbors(b1, b2)
                .into_iter()
                .filter(|&b| same_layer || self.layer(b) == level)
                .collect();
            if flank.len() != 2 {
                return Err(Error::Construction(format!(
                    "edge {e} at level {level} has {} flanking vertices ({:?}), expected 2",
                    flank.len(),
                    flank
                )));
            }

            let mut siblings = 0;
            for &endpoint in &[b1, b2] {
                for &f in &flank {
                    if let Some(&sib) = midpoints.get(&Edge::new(endpoint, f)) {
                        new_edges.insert(Edge::new(mid, sib));
                        siblings += 1;
                    }
                }
            }
            if siblings != 4 {
                return Err(Error::Construction(format!(
                    "midpoint {mid} of {e} found {siblings} neighboring midpoints, expected 4"
                )));
            }
        }

        let mut edges = self.edges.clone();
        edges.extend(new_edges.into_iter().map(|e| (e, level + 1)));
        edges.sort_unstable_by_key(|&(e, _)| e);

        let mut all_midpoints = self.midpoints.clone();
        all_midpoints.extend(midpoints);

        let mut topo = SphereTopology {
            k: level + 1,
            vertices,
            edge_layers: edges.iter().map(|&(e, l)| (e, l)).collect(),
            edges,
            midpoints: all_midpoints,
            adjacency: Vec::new(),
            labels: Vec::new(),
        };
        topo.rebuild_indexes();
        topo.labels = label::compute_all(&topo);
        Ok(topo)
    }

    /// Icosahedron subdivided `k` times, 0 <= k <= 6.
    pub fn build(k: u32) -> Result<SphereTopology> {
        if k > MAX_SUBDIVISIONS {
            return Err(Error::InvalidParameter(format!(
                "subdivision count must be at most {MAX_SUBDIVISIONS}, got {k}"
            )));
        }
        let mut g = SphereTopology::icosahedron();
        for _ in 0..k {
            g = g.subdivide_once()?;
        }
        Ok(g)
    }

    /// Reassembles a topology from parsed records, revalidating indexes.
    /// Labels are recomputed, so a file with tampered labels cannot smuggle
    /// them in; the caller compares if it needs to detect that.
    pub(crate) fn from_parts(
        k: u32,
        vertices: Vec<SphereVertex>,
        edges: Vec<(Edge, Layer)>,
    ) -> Result<SphereTopology> {
        let mut edges = edges;
        edges.sort_unstable_by_key(|&(e, _)| e);
        let mut midpoints = HashMap::new();
        for v in &vertices {
            if let Some((a, b)) = v.parents {
                midpoints.insert(Edge::new(a, b), v.id);
            }
        }
        let mut topo = SphereTopology {
            k,
            edge_layers: edges.iter().map(|&(e, l)| (e, l)).collect(),
            vertices,
            edges,
            midpoints,
            adjacency: Vec::new(),
            labels: Vec::new(),
        };
        topo.rebuild_indexes();
        topo.labels = label::compute_all(&topo);
        Ok(topo)
    }

    fn rebuild_indexes(&mut self) {
        let mut adjacency = vec![Vec::new(); self.vertices.len()];
        for &(e, _) in &self.edges {
            let (a, b) = e.endpoints();
            adjacency[a.index()].push(b);
            adjacency[b.index()].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        self.adjacency = adjacency;
    }

    fn common_neighbors(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        let na = &self.adjacency[a.index()];
        let nb = &self.adjacency[b.index()];
        na.iter().filter(|v| nb.binary_search(v).is_ok()).copied().collect()
    }

    pub fn subdivisions(&self) -> u32 {
        self.k
    }

    pub fn vertices(&self) -> &[SphereVertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &SphereVertex {
        &self.vertices[v.index()]
    }

    pub fn layer(&self, v: VertexId) -> Layer {
        self.vertices[v.index()].layer
    }

    /// The two subdivision parents of `v`, absent for layer-0 vertices.
    pub fn parents(&self, v: VertexId) -> Option<(VertexId, VertexId)> {
        self.vertices[v.index()].parents
    }

    /// All edges with their creation layers, sorted by canonical edge.
    pub fn edges(&self) -> &[(Edge, Layer)] {
        &self.edges
    }

    pub fn edge_layer(&self, e: Edge) -> Result<Layer> {
        self.edge_layers
            .get(&e)
            .copied()
            .ok_or_else(|| {
                let (u, v) = e.endpoints();
                Error::NotAnEdge(u, v)
            })
    }

    /// Physical links are exactly the newest-layer edges.
    pub fn is_physical(&self, e: Edge) -> Result<bool> {
        Ok(self.edge_layer(e)? == self.k)
    }

    /// The vertex that subdivided `e`, if any. Physical edges have none.
    pub fn midpoint_of(&self, e: Edge) -> Option<VertexId> {
        self.midpoints.get(&e).copied()
    }

    pub fn label(&self, v: VertexId) -> &Label {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// The unique common parent of `a` and `b`.
    ///
    /// Defined for `a == b` (itself), for adjacent same-layer vertices above
    /// the base layer (the shared subdivision parent), and for an adjacent
    /// parent/child pair (the parent).
    pub fn common_parent(&self, a: VertexId, b: VertexId) -> Result<VertexId> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Ok(a);
        }
        if !self.contains_edge(a, b) {
            return Err(Error::NoCommonParent(a, b));
        }
        let (la, lb) = (self.layer(a), self.layer(b));
        if la != lb {
            let (low, high) = if la < lb { (a, b) } else { (b, a) };
            let (p1, p2) = self.parents(high).expect("layer above 0 has parents");
            if p1 == low || p2 == low {
                return Ok(low);
            }
            return Err(Error::NoCommonParent(a, b));
        }
        if la == 0 {
            return Err(Error::NoCommonParent(a, b));
        }
        let (a1, a2) = self.parents(a).unwrap();
        let (b1, b2) = self.parents(b).unwrap();
        let shared: Vec<VertexId> =
            [a1, a2].into_iter().filter(|p| *p == b1 || *p == b2).collect();
        match shared.as_slice() {
            [p] => Ok(*p),
            _ => Err(Error::NoCommonParent(a, b)),
        }
    }
}

impl AdjacencyView for SphereTopology {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.adjacency[v.index()].clone()
    }

    fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.edge_layers.contains_key(&Edge::new(u, v))
    }
}

fn normalize(c: [f64; 3]) -> [f64; 3] {
    let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    [c[0] / norm, c[1] / norm, c[2] / norm]
}

fn midpoint(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0]
}

/// 10 * 4^k + 2
pub fn expected_vertex_count(k: u32) -> usize {
    10 * 4usize.pow(k) + 2
}

/// 4^i * 30
pub fn expected_layer_edge_count(i: u32) -> usize {
    4usize.pow(i) * 30
}

/// 10 * 4^(k+1) - 10
pub fn expected_total_edge_count(k: u32) -> usize {
    10 * 4usize.pow(k + 1) - 10
}
