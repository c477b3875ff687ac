#pragma once

#include <string>
#include <utility>
#include <vector>

#include "packperc/geometry.hpp"

namespace packperc {

/// Tangency / intersection graph of a packing.  An edge (i, j) is present iff
/// set_distance(s_i, s_j) <= tol * max(diam_i, diam_j); the relative tolerance
/// absorbs the O(tol) residuals that numerically computed layouts carry.
struct AdjacencyGraph {
    int n = 0;
    double tol = 0.0;
    std::vector<std::vector<int>> adj;           // sorted neighbor lists
    std::vector<std::pair<int, int>> edges;      // i < j, lexicographically sorted

    // CSR view used by the percolation engine (edge ids match `edges`).
    std::vector<int> offsets;
    std::vector<int> neighbors;
    std::vector<int> edge_ids;

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    bool has_edge(int i, int j) const;
    void finalize();  // rebuilds edges/CSR from adj
};

AdjacencyGraph build_graph(const Packing& p, double tol_rel);

/// Edge list as CSV lines "i,j" with i < j, lexicographically sorted.
std::string graph_to_csv(const AdjacencyGraph& g);

/// Shell decomposition around s0 at scale ell0: shape s lands in shell
/// floor(d(s0, s) / ell0).  `near` additionally collects every index with
/// d <= m0 * ell0.  s0 itself is reported with shell -1.
struct Shells {
    std::vector<int> shell_of;       // per index; -1 for s0
    std::vector<double> distances;   // d(s0, s); 0 for s0
    std::vector<int> near;           // indices with 0 <= d <= m0 * ell0
    double ell0 = 1.0;
    int m0 = 8;
};

Shells shells(const Packing& p, int s0, double ell0, int m0 = 8);

}  // namespace packperc
