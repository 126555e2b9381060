#ifndef VQLNET_H
#define VQLNET_H

/* Generated by cbindgen from the vqlnet-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every C API call.
 */
typedef enum {
  VQL_STATUS_OK = 0,
  VQL_STATUS_NULL_POINTER = 1,
  VQL_STATUS_INVALID_ARGUMENT = 2,
  VQL_STATUS_INVALID_VERTEX = 3,
  VQL_STATUS_NOT_AN_EDGE = 4,
  VQL_STATUS_MISSING_LINK = 5,
  VQL_STATUS_BUFFER_TOO_SMALL = 6,
  VQL_STATUS_INTERNAL = 7,
} VqlStatus;

/**
 * Router selector for routing and simulation calls.
 */
typedef enum {
  VQL_ROUTE_MODE_RING = 0,
  VQL_ROUTE_MODE_SPHERE_GLOBAL = 1,
  VQL_ROUTE_MODE_SPHERE_LOCAL = 2,
} VqlRouteMode;

/**
 * Opaque graph handle.
 */
typedef struct VqlGraph VqlGraph;

/**
 * Aggregate result of a load simulation.
 */
typedef struct {
  uint64_t samples;
  uint64_t collided_samples;
  double collision_fraction;
  /**
   * Number of distinct levels that appear as lowest collision levels.
   */
  uint64_t levels_hit;
} VqlSimSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *vql_last_error_message(void);

/**
 * Builds the ring overlay on 2^levels nodes.
 */
VqlStatus vql_ring_new(uint32_t levels, VqlGraph **out);

/**
 * Builds the sphere overlay with the given number of subdivisions.
 */
VqlStatus vql_sphere_new(uint32_t subdivisions, VqlGraph **out);

/**
 * Frees a graph handle. Null is a no-op.
 */
void vql_graph_free(VqlGraph *graph);

VqlStatus vql_graph_vertex_count(const VqlGraph *graph, uint64_t *out);

VqlStatus vql_graph_edge_count(const VqlGraph *graph, uint64_t *out);

/**
 * Exact diameter; fails with `InvalidArgument` above the exact-computation
 * budget of 10^4 vertices.
 */
VqlStatus vql_graph_diameter(const VqlGraph *graph, uint32_t *out);

/**
 * Shortest route from `from` to `to`. Writes up to `buf_len` vertex IDs
 * into `path_buf` and the full path length (in vertices) to `path_len`;
 * returns `BufferTooSmall` when the buffer cannot hold the whole path.
 * Pass a null buffer with `buf_len` 0 to query the length.
 */
VqlStatus vql_route(const VqlGraph *graph,
                    VqlRouteMode mode,
                    uint32_t from,
                    uint32_t to,
                    uint64_t seed,
                    uint32_t *path_buf,
                    uintptr_t buf_len,
                    uintptr_t *path_len);

/**
 * Renders the routing label of a sphere vertex as text. Two-call pattern:
 * `needed` receives the byte length including the NUL terminator.
 */
VqlStatus vql_label_render(const VqlGraph *graph,
                           uint32_t vertex,
                           char *buf,
                           uintptr_t buf_len,
                           uintptr_t *needed);

/**
 * Number of time steps a validated bootstrap schedule takes on this graph.
 */
VqlStatus vql_bootstrap_steps(const VqlGraph *graph, uint32_t *out);

/**
 * Runs the collision-under-load sweep and fills `out` with the aggregates.
 */
VqlStatus vql_simulate(const VqlGraph *graph,
                       VqlRouteMode mode,
                       uint64_t pairs,
                       uint64_t samples,
                       uint64_t seed,
                       VqlSimSummary *out);

/**
 * Serializes the graph into the canonical text format, NUL terminated.
 * Two-call pattern as for labels.
 */
VqlStatus vql_graph_serialize(const VqlGraph *graph,
                              char *buf,
                              uintptr_t buf_len,
                              uintptr_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VQLNET_H */
