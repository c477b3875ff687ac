#include "packperc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "packperc/circlepack.hpp"
#include "packperc/rng.hpp"

namespace packperc {

using nlohmann::json;

Generated triangular_disk_lattice(int n) {
    if (n < 1) throw std::invalid_argument("lattice size must be at least 1");
    Generated out;
    out.packing.dimension = 2;
    const double rt3 = std::sqrt(3.0);
    std::vector<int> left, right, bottom, top;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out.packing.shapes.push_back(Disk{{2.0 * i + j, rt3 * j}, 1.0});
            const int id = j * n + i;
            if (i == 0) left.push_back(id);
            if (i == n - 1) right.push_back(id);
            if (j == 0) bottom.push_back(id);
            if (j == n - 1) top.push_back(id);
        }
    }
    out.meta["family"] = "triangular";
    out.meta["n"] = n;
    out.meta["sides"] = {{"left", left}, {"right", right}, {"bottom", bottom}, {"top", top}};
    return out;
}

Generated moore_square_grid(int n) {
    if (n < 1) throw std::invalid_argument("grid size must be at least 1");
    Generated out;
    out.packing.dimension = 2;
    std::vector<int> left, right, bottom, top;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out.packing.shapes.push_back(Box{{double(i), double(j)}, {1.0, 1.0}});
            const int id = j * n + i;
            if (i == 0) left.push_back(id);
            if (i == n - 1) right.push_back(id);
            if (j == 0) bottom.push_back(id);
            if (j == n - 1) top.push_back(id);
        }
    }
    out.meta["family"] = "moore";
    out.meta["n"] = n;
    out.meta["window"] = {{"lo", {0.0, 0.0}}, {"hi", {double(n), double(n)}}};
    out.meta["sides"] = {{"left", left}, {"right", right}, {"bottom", bottom}, {"top", top}};
    return out;
}

Generated random_square_tiling(uint64_t seed, int depth) {
    if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
    Generated out;
    out.packing.dimension = 2;
    struct Cell {
        double x, y, side;
        int level;
    };
    std::vector<Cell> stack{{0.0, 0.0, 1.0, 0}};
    uint64_t draw = 0;
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        // the root always splits so depth >= 1 never yields the trivial tiling
        const bool split = c.level < depth &&
                           (c.level == 0 ||
                            uniform01(seed, RngStream::Generator, c.level, draw) < 0.5);
        ++draw;
        if (!split) {
            out.packing.shapes.push_back(Box{{c.x, c.y}, {c.side, c.side}});
            continue;
        }
        const double h = 0.5 * c.side;
        stack.push_back({c.x, c.y, h, c.level + 1});
        stack.push_back({c.x + h, c.y, h, c.level + 1});
        stack.push_back({c.x, c.y + h, h, c.level + 1});
        stack.push_back({c.x + h, c.y + h, h, c.level + 1});
    }
    out.meta["family"] = "square_tiling";
    out.meta["seed"] = seed;
    out.meta["depth"] = depth;
    out.meta["window"] = {{"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}}};
    return out;
}

namespace {

// Per-ring growth factor of the prism packing: rings of three mutually
// tangent disks, each next-ring disk tangent to two of the previous ring.
// Tangency closes only for r'/r = 5 + 2 sqrt(6).
constexpr double kPrismGrowth = 9.898979485566356;  // 5 + 2 sqrt(6)
constexpr int kPrismGeometryCap = 120;              // radii overflow beyond this

}  // namespace

Generated triangle_times_n(int levels) {
    if (levels < 1) throw std::invalid_argument("levels must be at least 1");
    Generated out;
    out.meta["family"] = "triangle_prism";
    out.meta["levels"] = levels;

    const bool geometric = levels <= kPrismGeometryCap;
    out.meta["geometric"] = geometric;

    std::vector<int> ring_of(3 * levels);
    for (int i = 0; i < levels; ++i)
        for (int k = 0; k < 3; ++k) ring_of[3 * i + k] = i;
    out.meta["ring_of"] = ring_of;

    // adjacency: ring edges plus two upward tangencies per vertex
    AdjacencyGraph g;
    g.n = 3 * levels;
    g.adj.assign(g.n, {});
    auto add_edge = [&](int a, int b) {
        g.adj[a].push_back(b);
        g.adj[b].push_back(a);
    };
    for (int i = 0; i < levels; ++i) {
        for (int k = 0; k < 3; ++k) {
            add_edge(3 * i + k, 3 * i + (k + 1) % 3);
            if (i + 1 < levels) {
                add_edge(3 * i + k, 3 * (i + 1) + k);
                add_edge(3 * i + k, 3 * (i + 1) + (k + 1) % 3);
            }
        }
    }
    g.finalize();
    out.graph = g;

    if (geometric) {
        out.packing.dimension = 2;
        out.packing.shapes.resize(3 * levels);
        std::vector<double> ring_radius(levels);
        double r = 1.0;
        for (int i = 0; i < levels; ++i) {
            ring_radius[i] = r;
            const double big_r = 2.0 * r / std::sqrt(3.0);
            const double phase = M_PI / 2.0 - i * (M_PI / 3.0);
            for (int k = 0; k < 3; ++k) {
                const double ang = phase + k * (2.0 * M_PI / 3.0);
                out.packing.shapes[3 * i + k] =
                    Disk{{big_r * std::cos(ang), big_r * std::sin(ang)}, r};
            }
            r *= kPrismGrowth;
        }
        out.meta["ring_radii"] = ring_radius;
    }
    return out;
}

namespace {

// Smallest center offset x such that the axis-aligned ellipse (a, b) centered
// at (x, y) does not overlap the hub; bisection on the intersection test.
double ladder_contact_offset(const Shape& hub, double a, double b, double y) {
    double lo = 0.0, hi = 2.0 * a + 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Shape cand = Ellipse{{mid, y}, a, b, 0.0};
        if (intersects_inflated(hub, cand, 0.0))
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14) break;
    }
    return hi;
}

}  // namespace

Generated ellipse_ladder(int aspect, int lines, int row_len) {
    if (aspect < 2) throw std::invalid_argument("aspect must be at least 2");
    if (lines < 1 || row_len < 1) throw std::invalid_argument("lines and row_len must be positive");

    const double a = 0.5;                  // semi-major: diameter 1
    const double b = 0.5 / aspect;         // semi-minor
    const double gap = 1e-3;               // guaranteed clearance between rows

    // Contact heights: bands on the upper half first; when those run out the
    // remaining rows mirror to the lower half.  Each band carries one row per
    // direction.
    const double spacing = 2.0 * b + gap;
    const double band_limit = 0.5 - 2.0 * b;  // a tangent chain must still exist at the band
    const int bands_needed = (lines + 1) / 2;
    std::vector<double> bands;
    for (double y = b + gap; y <= band_limit && static_cast<int>(bands.size()) < bands_needed;
         y += spacing)
        bands.push_back(y);
    for (int j = 0; static_cast<int>(bands.size()) < bands_needed; ++j) {
        const double y = -(b + gap) - j * spacing;
        if (y < -band_limit)
            throw std::runtime_error("ladder capacity exceeded for aspect " +
                                     std::to_string(aspect) + ": " + std::to_string(lines) +
                                     " rows requested");
        bands.push_back(y);
    }

    Generated out;
    out.packing.dimension = 2;
    out.packing.shapes.push_back(Ellipse{{0.0, 0.0}, a, b, M_PI / 2.0});  // vertical hub

    json rows = json::array();
    for (int row = 0; row < lines; ++row) {
        const double y = bands[row / 2];
        const bool rightward = (row % 2) == 0;
        const double x0 = ladder_contact_offset(out.packing.shapes[0], a, b, y);
        json row_meta;
        row_meta["y"] = y;
        row_meta["dir"] = rightward ? "+x" : "-x";
        row_meta["x0"] = rightward ? x0 : -x0;
        std::vector<int> ids;
        for (int k = 0; k < row_len; ++k) {
            const double cx = rightward ? x0 + k * 2.0 * a : -(x0 + k * 2.0 * a);
            ids.push_back(static_cast<int>(out.packing.shapes.size()));
            out.packing.shapes.push_back(Ellipse{{cx, y}, a, b, 0.0});
        }
        row_meta["indices"] = ids;
        rows.push_back(row_meta);
    }
    out.meta["family"] = "ellipse_ladder";
    out.meta["aspect"] = aspect;
    out.meta["lines"] = lines;
    out.meta["row_len"] = row_len;
    out.meta["diameter"] = 1.0;
    out.meta["rows"] = rows;
    return out;
}

Generated bond_counterexample(int m, int n) {
    if (m < 0 || n < 2) throw std::invalid_argument("need m >= 0 and n >= 2");
    // Chain disk k between tangent unit disks maps back from an equal-circle
    // chain in the inverted strip; radii shrink like 1/(2k^2).  Beyond the
    // cap the disks drop under tangency resolution.
    const int k0 = 2;  // k = 1 would collide with the neighboring lattice disks
    if (m > 100000)
        throw std::runtime_error("chain capacity exceeded: at most 100000 disks per tangent pair");

    Generated out;
    out.packing.dimension = 2;
    std::vector<int> left, right, bottom, top;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out.packing.shapes.push_back(Disk{{2.0 * i, 2.0 * j}, 1.0});
            const int id = j * n + i;
            if (i == 0) left.push_back(id);
            if (i == n - 1) right.push_back(id);
            if (j == 0) bottom.push_back(id);
            if (j == n - 1) top.push_back(id);
        }
    }
    const int lattice_count = n * n;

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            for (int k = k0; k < k0 + m; ++k) {
                const double denom = static_cast<double>(k) * k - 0.25;
                const double off = static_cast<double>(k) / denom;
                const double rho = 0.5 / denom;
                if (i + 1 < n)  // horizontal pair: chain grows upward
                    out.packing.shapes.push_back(Disk{{2.0 * i + 1.0, 2.0 * j + off}, rho});
                if (j + 1 < n)  // vertical pair: chain grows rightward
                    out.packing.shapes.push_back(Disk{{2.0 * i + off, 2.0 * j + 1.0}, rho});
            }
        }
    }

    out.meta["family"] = "bond_counterexample";
    out.meta["m"] = m;
    out.meta["n"] = n;
    out.meta["lattice_count"] = lattice_count;
    out.meta["sides"] = {{"left", left}, {"right", right}, {"bottom", bottom}, {"top", top}};
    return out;
}

Generated hyperbolic_ball(int degree, int generations) {
    if (degree < 7) throw std::invalid_argument("hyperbolic ball needs degree >= 7");
    if (generations < 1) throw std::invalid_argument("generations must be at least 1");

    struct Node {
        double theta;
        int ring;
        int below;  // number of neighbors in earlier rings
    };
    std::vector<Node> nodes{{0.0, 0, 0}};
    std::vector<std::vector<int>> adj(1);
    std::vector<int> ring{0};

    auto add_edge = [&](int u, int v) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    };

    std::vector<int> cycle;
    for (int k = 0; k < degree; ++k) {
        nodes.push_back({2.0 * M_PI * k / degree, 1, 1});
        adj.emplace_back();
        cycle.push_back(k + 1);
        add_edge(0, k + 1);
    }
    for (int k = 0; k < degree; ++k) add_edge(cycle[k], cycle[(k + 1) % degree]);

    for (int gen = 2; gen <= generations; ++gen) {
        const int L = static_cast<int>(cycle.size());
        std::vector<int> next_cycle;
        std::vector<int> shared(L);
        // one shared child per boundary edge
        for (int i = 0; i < L; ++i) {
            const double t0 = nodes[cycle[i]].theta;
            double t1 = nodes[cycle[(i + 1) % L]].theta;
            if (t1 <= t0) t1 += 2.0 * M_PI;
            shared[i] = static_cast<int>(nodes.size());
            nodes.push_back({0.5 * (t0 + t1), gen, 2});
            adj.emplace_back();
            add_edge(shared[i], cycle[i]);
            add_edge(shared[i], cycle[(i + 1) % L]);
        }
        // private children fill each vertex up to the target degree
        for (int i = 0; i < L; ++i) {
            const int v = cycle[i];
            const int prev_shared = shared[(i - 1 + L) % L];
            const int privates = degree - 4 - nodes[v].below;
            if (privates < 0)
                throw std::runtime_error("degree too small for hyperbolic construction");
            double t0 = nodes[prev_shared].theta;
            double t1 = nodes[shared[i]].theta;
            if (t1 <= t0) t1 += 2.0 * M_PI;
            next_cycle.push_back(prev_shared);
            for (int q = 0; q < privates; ++q) {
                const int id = static_cast<int>(nodes.size());
                const double frac = static_cast<double>(q + 1) / (privates + 1);
                nodes.push_back({t0 + frac * (t1 - t0), gen, 1});
                adj.emplace_back();
                add_edge(id, v);
                next_cycle.push_back(id);
            }
        }
        for (size_t i = 0; i < next_cycle.size(); ++i)
            add_edge(next_cycle[i], next_cycle[(i + 1) % next_cycle.size()]);
        cycle = std::move(next_cycle);
    }

    // rotation system from the provisional concentric drawing
    const int nv = static_cast<int>(nodes.size());
    Triangulation tri;
    tri.map.rot.resize(nv);
    auto pos = [&](int v) -> Vec2 {
        const double radius = std::pow(3.0, nodes[v].ring);
        return {radius * std::cos(nodes[v].theta), radius * std::sin(nodes[v].theta)};
    };
    for (int v = 0; v < nv; ++v) {
        auto& nb = adj[v];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        const Vec2 c = pos(v);
        std::sort(nb.begin(), nb.end(), [&](int x, int y) {
            const Vec2 px = pos(x), py = pos(y);
            return std::atan2(px[1] - c[1], px[0] - c[0]) < std::atan2(py[1] - c[1], py[0] - c[0]);
        });
        tri.map.rot[v] = nb;
    }
    tri.set_boundary(cycle);
    tri.check();

    const RadiiAssignment radii =
        compute_radii(tri, std::vector<double>(cycle.size(), 1.0), 1e-10);
    const LayoutPacking lay = layout(tri, radii);

    Generated out;
    out.packing = lay.to_packing();
    out.tri = tri;
    std::vector<int> ring_of(nv);
    for (int v = 0; v < nv; ++v) ring_of[v] = nodes[v].ring;
    out.meta["family"] = "hyperbolic_ball";
    out.meta["degree"] = degree;
    out.meta["generations"] = generations;
    out.meta["ring_of"] = ring_of;
    out.meta["layout_residual"] = lay.max_residual;
    return out;
}

Generated generate_family(const std::string& family, const json& params) {
    auto geti = [&](const char* key, int dflt) {
        return params.contains(key) ? params.at(key).get<int>() : dflt;
    };
    if (family == "triangular") return triangular_disk_lattice(geti("n", 8));
    if (family == "moore") return moore_square_grid(geti("n", 8));
    if (family == "square_tiling")
        return random_square_tiling(params.contains("seed") ? params.at("seed").get<uint64_t>() : 1,
                                    geti("depth", 3));
    if (family == "triangle_prism") return triangle_times_n(geti("levels", 8));
    if (family == "ellipse_ladder")
        return ellipse_ladder(geti("aspect", 16), geti("lines", 8), geti("row_len", 8));
    if (family == "bond_counterexample") return bond_counterexample(geti("m", 4), geti("n", 8));
    if (family == "hyperbolic_ball") return hyperbolic_ball(geti("degree", 7), geti("generations", 3));
    throw std::invalid_argument("unknown family: " + family);
}

}  // namespace packperc
