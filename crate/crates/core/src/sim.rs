//! Load simulation: how often do concurrently routed requests contend for
//! the same single-use link, and how deep in the hierarchy?
//!
//! Each sample draws distinct endpoints uniformly, routes every pair on the
//! unconsumed topology, and reports whether any link appears in two paths.
//! Only the lowest (costliest) level of any collision is recorded. Paths are
//! compared statically; the ledger is not consumed during the sweep.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{AdjacencyView, Edge, Path, VertexId};
use crate::ring_router::ring_path;
use crate::routing::HopMode;
use crate::seed::{child_seed, rng_from, Rng};
use crate::sphere_router::{global_path, local_path, NeighborhoodSource};
use crate::topo::Topology;

/// Which router generates the compared paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimRouting {
    Ring,
    SphereGlobal,
    SphereLocal,
}

impl SimRouting {
    pub fn name(self) -> &'static str {
        match self {
            SimRouting::Ring => "ring",
            SimRouting::SphereGlobal => "global",
            SimRouting::SphereLocal => "local",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    /// Concurrent requests per sample; 2 * pairs nodes are drawn.
    pub pairs: usize,
    pub samples: usize,
    pub seed: u64,
    pub routing: SimRouting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleRecord {
    pub collided: bool,
    /// Level of the deepest colliding link, when collided.
    pub lowest_level: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct SimReport {
    pub pairs: usize,
    pub samples: usize,
    pub seed: u64,
    pub routing: SimRouting,
    pub records: Vec<SampleRecord>,
    pub collided_samples: usize,
    pub collision_fraction: f64,
    /// lowest collision level -> number of samples bottoming out there.
    pub level_histogram: BTreeMap<u32, usize>,
}

/// Draws `2 * pairs` distinct vertices uniformly without replacement and
/// pairs them in draw order.
pub fn draw_request_pairs(
    topo: &Topology,
    pairs: usize,
    rng: &mut Rng,
) -> Result<Vec<(VertexId, VertexId)>> {
    let n = topo.vertex_count();
    if 2 * pairs > n {
        return Err(Error::InvalidParameter(format!(
            "{pairs} pairs need {} distinct nodes, the graph has {n}",
            2 * pairs
        )));
    }
    // Partial Fisher-Yates over the ID range.
    let mut ids: Vec<u32> = (0..n as u32).collect();
    for i in 0..2 * pairs {
        let j = rand::Rng::random_range(rng, i..n);
        ids.swap(i, j);
    }
    Ok((0..pairs)
        .map(|p| (VertexId(ids[2 * p]), VertexId(ids[2 * p + 1])))
        .collect())
}

/// Whether any link appears in two or more paths, and the level of the
/// deepest such link.
pub fn detect_collisions(paths: &[Path], topo: &Topology) -> Result<(bool, Option<u32>)> {
    let mut uses: HashMap<Edge, usize> = HashMap::new();
    for path in paths {
        for e in path.edges() {
            *uses.entry(e).or_insert(0) += 1;
        }
    }
    let mut lowest: Option<u32> = None;
    for (e, count) in uses {
        if count >= 2 {
            let level = topo.edge_level(e)?;
            lowest = Some(lowest.map_or(level, |l| l.min(level)));
        }
    }
    Ok((lowest.is_some(), lowest))
}

/// Level of an edge as the simulator classifies collisions; errors on
/// non-edges.
pub fn edge_level(topo: &Topology, e: Edge) -> Result<u32> {
    topo.edge_level(e)
}

/// Runs the full sweep. Identical configurations produce identical reports:
/// the draw of sample `s` uses the child seed `(seed, s, u64::MAX)` and the
/// route of pair `p` in sample `s` uses `(seed, s, p)`.
pub fn run_load_sim(topo: &Topology, cfg: &SimConfig) -> Result<SimReport> {
    let balls = match (&cfg.routing, topo) {
        (SimRouting::Ring, Topology::Ring(_)) => None,
        (SimRouting::SphereGlobal | SimRouting::SphereLocal, Topology::Sphere(s)) => {
            Some(NeighborhoodSource::precomputed(s))
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "routing mode {} does not fit a {} topology",
                cfg.routing.name(),
                topo.kind()
            )))
        }
    };

    let mut records = Vec::with_capacity(cfg.samples);
    for sample in 0..cfg.samples {
        let mut draw_rng = rng_from(child_seed(cfg.seed, sample as u64, u64::MAX));
        let endpoints = draw_request_pairs(topo, cfg.pairs, &mut draw_rng)?;
        let mut paths = Vec::with_capacity(cfg.pairs);
        for (pair_idx, &(a, b)) in endpoints.iter().enumerate() {
            let mut rng = rng_from(child_seed(cfg.seed, sample as u64, pair_idx as u64));
            let path = match (&cfg.routing, topo) {
                (SimRouting::Ring, Topology::Ring(r)) => ring_path(a, b, r, &mut rng)?,
                (SimRouting::SphereGlobal, Topology::Sphere(s)) => {
                    global_path(a, b, s, balls.as_ref().unwrap(), &mut rng)?
                }
                (SimRouting::SphereLocal, Topology::Sphere(s)) => {
                    local_path(a, b, s, balls.as_ref().unwrap(), &mut rng, HopMode::default())?
                }
                _ => unreachable!("mode checked above"),
            };
            paths.push(path);
        }
        let (collided, lowest_level) = detect_collisions(&paths, topo)?;
        records.push(SampleRecord { collided, lowest_level });
    }

    let collided_samples = records.iter().filter(|r| r.collided).count();
    let mut level_histogram = BTreeMap::new();
    for r in &records {
        if let Some(level) = r.lowest_level {
            *level_histogram.entry(level).or_insert(0) += 1;
        }
    }
    Ok(SimReport {
        pairs: cfg.pairs,
        samples: cfg.samples,
        seed: cfg.seed,
        routing: cfg.routing,
        records,
        collided_samples,
        collision_fraction: collided_samples as f64 / cfg.samples as f64,
        level_histogram,
    })
}
