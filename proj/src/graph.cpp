#include "packperc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "packperc/spatial_index.hpp"

namespace packperc {

bool AdjacencyGraph::has_edge(int i, int j) const {
    if (i < 0 || i >= n || j < 0 || j >= n) return false;
    return std::binary_search(adj[i].begin(), adj[i].end(), j);
}

void AdjacencyGraph::finalize() {
    edges.clear();
    for (int i = 0; i < n; ++i) {
        std::sort(adj[i].begin(), adj[i].end());
        adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
        for (int j : adj[i])
            if (i < j) edges.emplace_back(i, j);
    }
    std::sort(edges.begin(), edges.end());

    offsets.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + static_cast<int>(adj[i].size());
    neighbors.resize(offsets[n]);
    edge_ids.resize(offsets[n]);
    std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        const auto [i, j] = edges[e];
        neighbors[cursor[i]] = j;
        edge_ids[cursor[i]++] = e;
        neighbors[cursor[j]] = i;
        edge_ids[cursor[j]++] = e;
    }
}

AdjacencyGraph build_graph(const Packing& p, double tol_rel) {
    AdjacencyGraph g;
    g.n = static_cast<int>(p.shapes.size());
    g.tol = tol_rel;
    g.adj.assign(g.n, {});
    std::vector<double> diams(g.n);
    double max_d = 0.0;
    for (int i = 0; i < g.n; ++i) {
        diams[i] = diameter(p.shapes[i]);
        max_d = std::max(max_d, diams[i]);
    }
    // Inflate registered boxes by the largest admissible tolerance so no
    // near-tangent pair is ever missed by the index.
    SpatialIndex index(p, SpatialIndex::default_cell_size(p), 0.5 * tol_rel * max_d + 1e-300);
    index.for_each_candidate_pair([&](int i, int j) {
        const double threshold = tol_rel * std::max(diams[i], diams[j]);
        if (set_distance(p.shapes[i], p.shapes[j]) <= threshold) {
            g.adj[i].push_back(j);
            g.adj[j].push_back(i);
        }
    });
    g.finalize();
    return g;
}

std::string graph_to_csv(const AdjacencyGraph& g) {
    std::ostringstream out;
    for (const auto& [i, j] : g.edges) out << i << "," << j << "\n";
    return out.str();
}

Shells shells(const Packing& p, int s0, double ell0, int m0) {
    if (!(ell0 > 0.0)) throw std::invalid_argument("shell width must be positive");
    if (s0 < 0 || s0 >= static_cast<int>(p.shapes.size()))
        throw std::invalid_argument("source index out of range");
    Shells out;
    out.ell0 = ell0;
    out.m0 = m0;
    const int n = static_cast<int>(p.shapes.size());
    out.shell_of.assign(n, -1);
    out.distances.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (i == s0) continue;
        const double d = set_distance(p.shapes[s0], p.shapes[i]);
        out.distances[i] = d;
        out.shell_of[i] = static_cast<int>(std::floor(d / ell0));
        if (d <= m0 * ell0) out.near.push_back(i);
    }
    return out;
}

}  // namespace packperc
