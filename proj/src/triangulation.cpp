#include "packperc/triangulation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace packperc {

namespace {

// position of u in rot[v]
int neighbor_pos(const std::vector<std::vector<int>>& rot, int v, int u) {
    const auto& r = rot[v];
    for (size_t i = 0; i < r.size(); ++i)
        if (r[i] == u) return static_cast<int>(i);
    throw std::runtime_error("rotation system is not symmetric");
}

}  // namespace

std::vector<std::vector<int>> PlanarMap::faces() const {
    std::map<std::pair<int, int>, bool> seen;
    for (int v = 0; v < n(); ++v)
        for (int u : rot[v]) seen[{v, u}] = false;

    std::vector<std::vector<int>> out;
    for (auto& [edge, used] : seen) {
        if (used) continue;
        std::vector<int> walk;
        std::pair<int, int> cur = edge;
        while (!seen.at(cur)) {
            seen.at(cur) = true;
            walk.push_back(cur.first);
            const int pos = neighbor_pos(rot, cur.second, cur.first);
            const int next = rot[cur.second][(pos + 1) % rot[cur.second].size()];
            cur = {cur.second, next};
        }
        out.push_back(std::move(walk));
    }
    return out;
}

void PlanarMap::check_simple() const {
    for (int v = 0; v < n(); ++v) {
        std::set<int> uniq;
        for (int u : rot[v]) {
            if (u == v) throw std::runtime_error("self loop at vertex " + std::to_string(v));
            if (u < 0 || u >= n()) throw std::runtime_error("neighbor out of range");
            if (!uniq.insert(u).second)
                throw std::runtime_error("repeated neighbor at vertex " + std::to_string(v));
        }
        for (int u : rot[v]) neighbor_pos(rot, u, v);  // symmetry
    }
}

void Triangulation::set_boundary(std::vector<int> cycle) {
    boundary = std::move(cycle);
    is_boundary.assign(n(), false);
    for (int v : boundary) is_boundary[v] = true;
}

namespace {

// canonical form of a cyclic vertex walk, up to rotation only
std::vector<int> canon_cycle(std::vector<int> walk) {
    if (walk.empty()) return walk;
    const auto it = std::min_element(walk.begin(), walk.end());
    std::rotate(walk.begin(), it, walk.end());
    return walk;
}

}  // namespace

void Triangulation::check() const {
    map.check_simple();
    if (is_boundary.size() != static_cast<size_t>(n()))
        throw std::runtime_error("boundary flags out of sync");
    const auto all_faces = map.faces();
    const auto want = canon_cycle(boundary);
    bool boundary_found = boundary.empty();
    for (const auto& f : all_faces) {
        if (!boundary_found && canon_cycle(f) == want) {
            boundary_found = true;
            continue;
        }
        if (f.size() != 3)
            throw std::runtime_error("non-triangular inner face of length " +
                                     std::to_string(f.size()));
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
            throw std::runtime_error("degenerate face");
    }
    if (!boundary_found) throw std::runtime_error("designated boundary is not a face walk");
}

ExtensionResult extend_to_triangulation(const PlanarMap& h) {
    h.check_simple();
    const auto face_walks = h.faces();
    for (const auto& f : face_walks)
        if (f.size() < 3)
            throw std::invalid_argument("face walk of length " + std::to_string(f.size()) +
                                        " cannot be extended");

    const int n0 = h.n();
    ExtensionResult out;
    out.original_vertices = n0;

    // Corner insertions at original vertices: at the corner of face f between
    // consecutive neighbors x and succ(x) of v, insert (w_prev, w_next).
    std::vector<std::map<int, std::pair<int, int>>> corner(n0);  // v -> pos(x) -> pair
    std::vector<std::vector<int>> rot(n0);
    int next_id = n0;

    for (const auto& walk : face_walks) {
        const int k = static_cast<int>(walk.size());
        std::vector<int> w(k), idx(k);
        for (int j = 0; j < k; ++j) w[j] = next_id++;
        const int hub = next_id++;
        out.face_cycles.push_back(w);
        out.face_hubs.push_back(hub);
        rot.resize(next_id);

        for (int j = 0; j < k; ++j) {
            const int vj = walk[j];
            const int vnext = walk[(j + 1) % k];
            const int vprev = walk[(j - 1 + k) % k];
            const int wj = w[j];
            const int wprev = w[(j - 1 + k) % k];
            // counterclockwise order around w_j
            rot[wj] = {vj, wprev, hub, w[(j + 1) % k], vnext};
            // corner of this face at vj sits between vprev and vnext
            const int pos = neighbor_pos(h.rot, vj, vprev);
            corner[vj][pos] = {wprev, wj};
        }
        std::vector<int> hub_rot(w.rbegin(), w.rend());
        rot[hub] = std::move(hub_rot);
    }

    // Rebuild original rotations with the corner vertices spliced in.
    for (int v = 0; v < n0; ++v) {
        const auto& old = h.rot[v];
        std::vector<int> nr;
        nr.reserve(old.size() * 3);
        for (size_t i = 0; i < old.size(); ++i) {
            nr.push_back(old[i]);
            const auto it = corner[v].find(static_cast<int>(i));
            if (it == corner[v].end())
                throw std::runtime_error("missing corner insertion — inconsistent face traversal");
            nr.push_back(it->second.first);
            nr.push_back(it->second.second);
        }
        rot[v] = std::move(nr);
    }

    out.tri.map.rot = std::move(rot);
    // Designate one hub triangle of the last input face as the boundary.
    const auto& wl = out.face_cycles.back();
    const int hub = out.face_hubs.back();
    out.tri.set_boundary({hub, wl[0], wl[1]});
    out.tri.check();
    return out;
}

PlanarMap grid_map(int rows, int cols) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("grid needs rows, cols >= 2");
    PlanarMap m;
    m.rot.resize(rows * cols);
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            std::vector<int>& out = m.rot[id(r, c)];
            if (c + 1 < cols) out.push_back(id(r, c + 1));  // east
            if (r + 1 < rows) out.push_back(id(r + 1, c));  // north
            if (c > 0) out.push_back(id(r, c - 1));         // west
            if (r > 0) out.push_back(id(r - 1, c));         // south
        }
    }
    return m;
}

Triangulation flower(int k) {
    if (k < 3) throw std::invalid_argument("flower needs k >= 3");
    Triangulation t;
    t.map.rot.resize(k + 1);
    for (int i = 1; i <= k; ++i) t.map.rot[0].push_back(i);
    for (int i = 1; i <= k; ++i) {
        const int next = i == k ? 1 : i + 1;
        const int prev = i == 1 ? k : i - 1;
        t.map.rot[i] = {next, 0, prev};
    }
    std::vector<int> cycle(k);
    for (int i = 0; i < k; ++i) cycle[i] = i + 1;
    t.set_boundary(cycle);
    t.check();
    return t;
}

}  // namespace packperc
