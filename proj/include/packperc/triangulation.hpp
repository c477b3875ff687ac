#pragma once

#include <string>
#include <utility>
#include <vector>

namespace packperc {

/// A planar map: per-vertex cyclic neighbor order (counterclockwise).
/// Faces are the orbits of the successor rule on directed edges.
struct PlanarMap {
    std::vector<std::vector<int>> rot;

    int n() const { return static_cast<int>(rot.size()); }

    /// All face walks; each entry lists the vertices (v1, ..., vk) of the
    /// directed-edge orbit (v1->v2, ..., vk->v1).
    std::vector<std::vector<int>> faces() const;

    /// Simplicity and rotation-system consistency; throws on violation.
    void check_simple() const;
};

/// A planar triangulation with a designated boundary cycle: every face other
/// than the boundary walk is a 3-cycle.
struct Triangulation {
    PlanarMap map;
    std::vector<int> boundary;      // boundary face walk (may be empty: sphere)
    std::vector<bool> is_boundary;  // derived flags

    int n() const { return map.n(); }
    int degree(int v) const { return static_cast<int>(map.rot[v].size()); }
    bool interior(int v) const { return !is_boundary[v]; }

    void set_boundary(std::vector<int> cycle);

    /// Full invariant check: simple map, boundary cycle is a face walk, and
    /// every other face is a triangle with distinct vertices.
    void check() const;
};

struct ExtensionResult {
    Triangulation tri;
    int original_vertices = 0;          // vertices 0..original-1 map to the input
    std::vector<std::vector<int>> face_cycles;  // per input face: the new w-cycle
    std::vector<int> face_hubs;                 // per input face: the hub vertex
};

/// Extends a simple connected planar map to a simple triangulation: each face
/// of walk length k receives a k-cycle of new vertices (w_j adjacent to v_j
/// and v_{j+1}) plus a hub adjacent to the whole cycle.  Original degrees are
/// exactly tripled; the new neighbors of original vertices have degree 5.
/// The returned boundary is one hub triangle of the last input face.
ExtensionResult extend_to_triangulation(const PlanarMap& h);

/// Planar map of a rows x cols grid graph (rows, cols >= 2).
PlanarMap grid_map(int rows, int cols);

/// Flower: one interior hub surrounded by a k-cycle, k >= 3.
Triangulation flower(int k);

}  // namespace packperc
