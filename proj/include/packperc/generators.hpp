#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

#include "packperc/geometry.hpp"
#include "packperc/graph.hpp"
#include "packperc/triangulation.hpp"

namespace packperc {

/// Output of a windowed family constructor.  `meta` documents the window,
/// boundary index sets and any per-family quantities; `graph` is set when the
/// family provides its adjacency directly (deep prisms whose disk radii
/// exceed the floating-point range carry no usable geometry).
struct Generated {
    Packing packing;
    nlohmann::json meta;
    std::optional<AdjacencyGraph> graph;
    std::optional<Triangulation> tri;

    bool has_geometry() const { return !packing.shapes.empty(); }
};

/// Unit-radius disks on the hexagonal lattice filling an n x n rhombus:
/// disk (i, j) sits at (2i + j, j sqrt(3)).  Interior disks touch 6 others.
Generated triangular_disk_lattice(int n);

/// n^2 unit squares tiling [0, n]^2; interior squares touch exactly 8 others
/// (corner contacts included).
Generated moore_square_grid(int n);

/// Tiling of the unit square by recursive random quad-subdivision: each cell
/// splits into four with probability 1/2 per level, to the given depth.
Generated random_square_tiling(uint64_t seed, int depth);

/// Disk packing of the triangulated prism over a triangle: rings of three
/// mutually tangent disks, each ring tangent to the next, radii growing by a
/// fixed factor per ring.  Rings beyond the floating-point range are emitted
/// as a graph-only instance.
Generated triangle_times_n(int levels);

/// One vertical ellipse of aspect `aspect` and diameter 1, plus `lines` rows
/// of horizontal ellipses of the same aspect and diameter: each row is a
/// tangent chain of `row_len` ellipses whose first member is tangent to the
/// hub.  Rows attach at distinct contact heights, alternating sides.
Generated ellipse_ladder(int aspect, int lines, int row_len = 8);

/// Square-lattice packing of unit disks on the n x n window with `m` extra
/// disks per tangent pair, each tangent to both members of the pair (a chain
/// constructed through inversion to a parallel strip).
Generated bond_counterexample(int m, int n);

/// Finite ball of the degree-regular hyperbolic triangulation, circle-packed
/// with unit boundary radii.
Generated hyperbolic_ball(int degree, int generations);

/// Dispatch by family name with a parameter object; throws on unknown names.
Generated generate_family(const std::string& family, const nlohmann::json& params);

}  // namespace packperc
