//! C ABI over the vqlnet library: opaque graph handles, status codes and
//! flat buffers, so other languages can build and query the overlay
//! networks, route on them and run the load simulation.
//!
//! Conventions: every function returns a [`VqlStatus`]; results go to out
//! parameters. Variable-size results use the two-call pattern: pass a null
//! or short buffer to learn the required length. `vql_last_error_message`
//! returns a thread-local description of the most recent failure.

// Callers own the usual FFI obligations (valid pointers, correct buffer
// lengths), stated per function; no per-item safety sections beyond that.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use vqlnet::entangle::bootstrap_schedule;
use vqlnet::graph::{diameter, AdjacencyView, VertexId};
use vqlnet::ring_router::ring_path;
use vqlnet::routing::HopMode;
use vqlnet::seed::{child_seed, rng_from};
use vqlnet::sim::{run_load_sim, SimConfig, SimRouting};
use vqlnet::sphere_router::{global_path, local_path, NeighborhoodSource};
use vqlnet::topo::Topology;
use vqlnet::{Error, RingTopology, SphereTopology};

/// Status code of every C API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VqlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidVertex = 3,
    NotAnEdge = 4,
    MissingLink = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Router selector for routing and simulation calls.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VqlRouteMode {
    Ring = 0,
    SphereGlobal = 1,
    SphereLocal = 2,
}

/// Aggregate result of a load simulation.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct VqlSimSummary {
    pub samples: u64,
    pub collided_samples: u64,
    pub collision_fraction: f64,
    /// Number of distinct levels that appear as lowest collision levels.
    pub levels_hit: u64,
}

/// Opaque graph handle.
pub struct VqlGraph {
    topo: Topology,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn status_of(err: &Error) -> VqlStatus {
    match err {
        Error::InvalidVertex(..) => VqlStatus::InvalidVertex,
        Error::NotAnEdge(..) => VqlStatus::NotAnEdge,
        Error::MissingLink(..) => VqlStatus::MissingLink,
        Error::InvalidParameter(_) => VqlStatus::InvalidArgument,
        _ => VqlStatus::Internal,
    }
}

fn guard<F: FnOnce() -> VqlStatus>(body: F) -> VqlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            VqlStatus::Internal
        }
    }
}

fn fail(err: Error) -> VqlStatus {
    set_error(&err.to_string());
    status_of(&err)
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vql_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Builds the ring overlay on 2^levels nodes.
#[no_mangle]
pub unsafe extern "C" fn vql_ring_new(levels: u32, out: *mut *mut VqlGraph) -> VqlStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return VqlStatus::NullPointer;
        }
        match RingTopology::new(levels) {
            Ok(ring) => {
                *out = Box::into_raw(Box::new(VqlGraph { topo: Topology::Ring(ring) }));
                VqlStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Builds the sphere overlay with the given number of subdivisions.
#[no_mangle]
pub unsafe extern "C" fn vql_sphere_new(subdivisions: u32, out: *mut *mut VqlGraph) -> VqlStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return VqlStatus::NullPointer;
        }
        match SphereTopology::build(subdivisions) {
            Ok(sphere) => {
                *out = Box::into_raw(Box::new(VqlGraph { topo: Topology::Sphere(sphere) }));
                VqlStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Frees a graph handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn vql_graph_free(graph: *mut VqlGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

unsafe fn deref<'a>(graph: *const VqlGraph) -> Option<&'a VqlGraph> {
    if graph.is_null() {
        set_error("graph handle is null");
        None
    } else {
        Some(&*graph)
    }
}

#[no_mangle]
pub unsafe extern "C" fn vql_graph_vertex_count(
    graph: *const VqlGraph,
    out: *mut u64,
) -> VqlStatus {
    guard(|| {
        let Some(g) = deref(graph) else { return VqlStatus::NullPointer };
        if out.is_null() {
            set_error("out pointer is null");
            return VqlStatus::NullPointer;
        }
        *out = g.topo.vertex_count() as u64;
        VqlStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn vql_graph_edge_count(graph: *const VqlGraph, out: *mut u64) -> VqlStatus {
    guard(|| {
        let Some(g) = deref(graph) else { return VqlStatus::NullPointer };
        if out.is_null() {
            set_error("out pointer is null");
            return VqlStatus::NullPointer;
        }
        *out = match &g.topo {
            // Closed form: one level-0 link plus 2^(l+1) links per level.
            Topology::Ring(r) => (1u64 << (r.levels() + 1)) - 3,
            Topology::Sphere(s) => s.edges().len() as u64,
        };
        VqlStatus::Ok
    })
}

/// Exact diameter; fails with `InvalidArgument` above the exact-computation
/// budget of 10^4 vertices.
#[no_mangle]
pub unsafe extern "C" fn vql_graph_diameter(graph: *const VqlGraph, out: *mut u32) -> VqlStatus {
    guard(|| {
        let Some(g) = deref(graph) else { return VqlStatus::NullPointer };
        if out.is_null() {
            set_error("out pointer is null");
            return VqlStatus::NullPointer;
        }
        match diameter(&g.topo) {
            Ok(d) => {
                *out = d;
                VqlStatus::Ok
            }
            Err(e @ Error::OverBudget { .. }) => {
                set_error(&e.to_string());
                VqlStatus::InvalidArgument
            }
            Err(e) => fail(e),
        }
    })
}

/// Shortest route from `from` to `to`. Writes up to `buf_len` vertex IDs
/// into `path_buf` and the full path length (in vertices) to `path_len`;
/// returns `BufferTooSmall` when the buffer cannot hold the whole path.
/// Pass a null buffer with `buf_len` 0 to query the length.
#[no_mangle]
pub unsafe extern "C" fn vql_route(
    graph: *const VqlGraph,
    mode: VqlRouteMode,
    from: u32,
    to: u32,
    seed: u64,
    path_buf: *mut u32,
    buf_len: usize,
    path_len: *mut usize,
) -> VqlStatus {
    guard(|| {
        let Some(g) = deref(graph) else { return VqlStatus::NullPointer };
        if path_len.is_null() {
            set_error("path_len pointer is null");
            return VqlStatus::NullPointer;
        }
        let (a, b) = (VertexId(from), VertexId(to));
        let mut rng = rng_from(child_seed(seed, from as u64, to as u64));
        let path = match (mode, &g.topo) {
            (VqlRouteMode::Ring, Topology::Ring(r)) => ring_path(a, b, r, &mut rng),
            (VqlRouteMode::SphereGlobal, Topology::Sphere(s)) => {
                global_path(a, b, s, &NeighborhoodSource::on_demand(), &mut rng)
            }
            (VqlRouteMode::SphereLocal, Topology::Sphere(s)) => {
                local_path(a, b, s, &NeighborhoodSource::on_demand(), &mut rng, HopMode::default())
            }
            _ => {
                set_error("route mode does not fit this topology");
                return VqlStatus::InvalidArgument;
            }
        };
        let path = match path {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        *path_len = path.vertices().len();
        if path_buf.is_null() || buf_len < path.vertices().len() {
            set_error("path buffer is too small");
            return VqlStatus::BufferTooSmall;
        }
        for (i, v) in path.vertices().iter().enumerate() {
            *path_buf.add(i) = v.0;
        }
        VqlStatus::Ok
    })
}

/// Renders the routing label of a sphere vertex as text. Two-call pattern:
/// `needed` receives the byte length including the NUL terminator.
#[no_mangle]
pub unsafe extern "C" fn vql_label_render(
    graph: *const VqlGraph,
    vertex: u32,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> VqlStatus {
    guard(|| {
        let Some(g) = deref(graph) else { return VqlStatus::NullPointer };
        if needed.is_null() {
            set_error("needed pointer is null");
            return VqlStatus::NullPointer;
        }
        let Topology::Sphere(s) = &g.topo else {
            set_error("labels exist on sphere graphs only");
            return VqlStatus::InvalidArgument;
        };
        if let Err(e) = s.check_vertex(VertexId(vertex)) {
            return fail(e);
        }
        let rendered = s.label(VertexId(vertex)).render();
        write_text(&rendered, buf, buf_len, needed)
    })
}

/// Number of time steps a validated bootstrap schedule takes on this graph.
#[no_mangle]
pub unsafe extern "C" fn vql_bootstrap_steps(graph: *const VqlGraph, out: *mut u32) -> VqlStatus {
    guard(|| {
        let Some(g) = deref(graph) else { return VqlStatus::NullPointer };
        if out.is_null() {
            set_error("out pointer is null");
            return VqlStatus::NullPointer;
        }
        match bootstrap_schedule(&g.topo) {
            Ok(timeline) => {
                *out = timeline.len() as u32;
                VqlStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs the collision-under-load sweep and fills `out` with the aggregates.
#[no_mangle]
pub unsafe extern "C" fn vql_simulate(
    graph: *const VqlGraph,
    mode: VqlRouteMode,
    pairs: u64,
    samples: u64,
    seed: u64,
    out: *mut VqlSimSummary,
) -> VqlStatus {
    guard(|| {
        let Some(g) = deref(graph) else { return VqlStatus::NullPointer };
        if out.is_null() {
            set_error("out pointer is null");
            return VqlStatus::NullPointer;
        }
        let routing = match mode {
            VqlRouteMode::Ring => SimRouting::Ring,
            VqlRouteMode::SphereGlobal => SimRouting::SphereGlobal,
            VqlRouteMode::SphereLocal => SimRouting::SphereLocal,
        };
        let cfg =
            SimConfig { pairs: pairs as usize, samples: samples as usize, seed, routing };
        match run_load_sim(&g.topo, &cfg) {
            Ok(report) => {
                *out = VqlSimSummary {
                    samples: report.samples as u64,
                    collided_samples: report.collided_samples as u64,
                    collision_fraction: report.collision_fraction,
                    levels_hit: report.level_histogram.len() as u64,
                };
                VqlStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Serializes the graph into the canonical text format, NUL terminated.
/// Two-call pattern as for labels.
#[no_mangle]
pub unsafe extern "C" fn vql_graph_serialize(
    graph: *const VqlGraph,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> VqlStatus {
    guard(|| {
        let Some(g) = deref(graph) else { return VqlStatus::NullPointer };
        if needed.is_null() {
            set_error("needed pointer is null");
            return VqlStatus::NullPointer;
        }
        let text = vqlnet::io::serialize_graph(&g.topo);
        write_text(&text, buf, buf_len, needed)
    })
}

unsafe fn write_text(
    text: &str,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> VqlStatus {
    let bytes = text.as_bytes();
    *needed = bytes.len() + 1;
    if buf.is_null() || buf_len < bytes.len() + 1 {
        set_error("buffer is too small");
        return VqlStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
    *buf.add(bytes.len()) = 0;
    VqlStatus::Ok
}
