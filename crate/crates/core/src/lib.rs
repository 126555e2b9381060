//! Virtual-quantum-link (VQL) network library.
//!
//! Builds ring and sphere overlay topologies whose links model single-use
//! entangled pairs, routes over them with shortest-path algorithms that need
//! only local information, schedules the time-stepped creation and
//! replenishment of the links, and measures how concurrent requests collide
//! over the shared single-use links.

pub mod entangle;
pub mod error;
pub mod graph;
pub mod io;
pub mod label;
pub mod ring;
pub mod ring_router;
pub mod routing;
pub mod seed;
pub mod sim;
pub mod sphere;
pub mod sphere_router;
pub mod topo;

pub use error::{Error, Result};
pub use graph::{AdjacencyView, Edge, Path, VertexId};
pub use ring::RingTopology;
pub use sphere::SphereTopology;
pub use topo::Topology;
