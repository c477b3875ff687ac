#include <doctest.h>

#include <cmath>
#include <vector>

#include "packperc/generators.hpp"
#include "packperc/percolation.hpp"

using namespace packperc;

namespace {

std::vector<int> side(const Generated& gen, const char* name) {
    return gen.meta.at("sides").at(name).get<std::vector<int>>();
}

// exhaustive connectivity between index sets for a given open-set mask
bool mask_connected(const AdjacencyGraph& g, uint32_t mask, const std::vector<int>& from,
                    const std::vector<int>& to) {
    std::vector<char> open(g.n), seen(g.n, 0), goal(g.n, 0);
    for (int v = 0; v < g.n; ++v) open[v] = (mask >> v) & 1;
    for (int v : to) goal[v] = 1;
    std::vector<int> stack;
    for (int v : from)
        if (open[v] && !seen[v]) {
            if (goal[v]) return true;
            seen[v] = 1;
            stack.push_back(v);
        }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : g.adj[v]) {
            if (!open[w] || seen[w]) continue;
            if (goal[w]) return true;
            seen[w] = 1;
            stack.push_back(w);
        }
    }
    return false;
}

}  // namespace

TEST_CASE("site samples: degenerate p and binomial mean") {
    AdjacencyGraph g;
    g.n = 1000000;
    g.adj.assign(g.n, {});
    g.finalize();
    const auto closed = sample_sites(g, 0.0, 42, 0);
    const auto open = sample_sites(g, 1.0, 42, 0);
    uint64_t c0 = 0, c1 = 0, cm = 0;
    const double p = 0.37;
    const auto mid = sample_sites(g, p, 42, 0);
    for (int i = 0; i < g.n; ++i) {
        c0 += closed.open[i];
        c1 += open.open[i];
        cm += mid.open[i];
    }
    CHECK(c0 == 0);
    CHECK(c1 == static_cast<uint64_t>(g.n));
    const double sigma = std::sqrt(p * (1 - p) * g.n);
    CHECK(std::abs(static_cast<double>(cm) - p * g.n) < 4.0 * sigma);

    // pure function of (seed, trial, index)
    const auto again = sample_sites(g, p, 42, 0);
    CHECK(again.open == mid.open);
    const auto other_trial = sample_sites(g, p, 42, 1);
    CHECK(other_trial.open != mid.open);
}

TEST_CASE("reach event on a tangent chain") {
    Packing chain;
    for (int k = 0; k < 5; ++k) chain.shapes.push_back(Disk{{2.0 * k, 0.0}, 1.0});
    const auto g = build_graph(chain, 1e-9);
    SiteSample all_open{std::vector<uint8_t>(5, 1), 1.0, 0, 0};
    CHECK(reach_event(chain, g, all_open, 0, 6.0));    // d(s0, s4) = 6
    CHECK_FALSE(reach_event(chain, g, all_open, 0, 6.5));
    SiteSample s0_closed = all_open;
    s0_closed.open[0] = 0;
    CHECK_FALSE(reach_event(chain, g, s0_closed, 0, 1.0));
    SiteSample broken = all_open;
    broken.open[3] = 0;  // open cluster of s0 ends at disk 2, distance 2
    CHECK_FALSE(reach_event(chain, g, broken, 0, 6.0));
    CHECK(reach_event(chain, g, broken, 0, 2.0));
}

TEST_CASE("crossing events on square configurations") {
    // one full-height square crosses top-bottom
    Packing p1;
    p1.shapes = {Box{{0.4, 0.0}, {0.2, 1.0}}};
    Rect unit{{0, 0}, {1, 1}};
    SiteSample open1{{1}, 1.0, 0, 0};
    CHECK(crossing_event(p1, open1, unit, CrossDirection::TopBottom, Color::Open, true));
    SiteSample closed1{{0}, 0.0, 0, 0};
    CHECK_FALSE(crossing_event(p1, closed1, unit, CrossDirection::TopBottom, Color::Open, true));
    CHECK(crossing_event(p1, closed1, unit, CrossDirection::TopBottom, Color::Closed, true));

    // 2x2 split with only NW and SE open: crossing iff diagonal contacts count
    Packing p2;
    p2.shapes = {Box{{0, 0.5}, {0.5, 0.5}}, Box{{0.5, 0.5}, {0.5, 0.5}}, Box{{0, 0}, {0.5, 0.5}},
                 Box{{0.5, 0}, {0.5, 0.5}}};
    SiteSample nwse{{1, 0, 0, 1}, 0.5, 0, 0};
    CHECK(crossing_event(p2, nwse, unit, CrossDirection::TopBottom, Color::Open, true));
    CHECK_FALSE(crossing_event(p2, nwse, unit, CrossDirection::TopBottom, Color::Open, false));
}

TEST_CASE("bond samples and bond connectivity") {
    const auto gen = moore_square_grid(4);
    const auto g = build_graph(gen.packing, 1e-9);
    const auto none = sample_bonds(g, 0.0, 5, 0);
    const auto all = sample_bonds(g, 1.0, 5, 0);
    uint64_t total = 0;
    for (auto b : all.open) total += b;
    CHECK(total == static_cast<uint64_t>(g.edge_count()));
    total = 0;
    for (auto b : none.open) total += b;
    CHECK(total == 0);

    AdjacencyGraph big;
    big.n = 2;
    big.adj = {{1}, {0}};
    big.finalize();
    uint64_t hits = 0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) hits += sample_bonds(big, 0.37, 9, t).open[0];
    const double sigma = std::sqrt(0.37 * 0.63 * trials);
    CHECK(std::abs(static_cast<double>(hits) - 0.37 * trials) < 4.0 * sigma);
}

TEST_CASE("exhaustive duality: 3x3 triangular rhombus crossing at one half") {
    const auto gen = triangular_disk_lattice(3);
    const auto g = build_graph(gen.packing, 1e-9);
    REQUIRE(g.n == 9);
    const auto left = side(gen, "left"), right = side(gen, "right");
    const auto bottom = side(gen, "bottom"), top = side(gen, "top");
    int lr_open = 0;
    for (uint32_t mask = 0; mask < 512; ++mask) {
        const bool open_lr = mask_connected(g, mask, left, right);
        const bool closed_tb = mask_connected(g, ~mask & 511u, bottom, top);
        CHECK(open_lr == !closed_tb);  // triangulation duality, config by config
        lr_open += open_lr;
    }
    CHECK(lr_open == 256);  // exactly one half
}

TEST_CASE("monte_carlo: triangular crossing near one half, determinism") {
    const auto gen = triangular_disk_lattice(8);
    const auto g = build_graph(gen.packing, 1e-9);
    EventSpec ev = EventSpec::crossing({}, CrossDirection::LeftRight, Color::Open, true);
    ev.side_sets = {side(gen, "left"), side(gen, "right")};

    const auto est = monte_carlo(ev, gen.packing, g, 0.5, 4000, 11, 2);
    CHECK(est.phat > 0.45);
    CHECK(est.phat < 0.55);
    CHECK(est.ci_lo <= est.phat);
    CHECK(est.ci_hi >= est.phat);

    for (int workers : {1, 4, 8}) {
        const auto e2 = monte_carlo(ev, gen.packing, g, 0.5, 4000, 11, workers);
        CHECK(e2.hits == est.hits);
    }

    CHECK(monte_carlo(ev, gen.packing, g, 0.0, 500, 11, 2).phat == 0.0);
    CHECK(monte_carlo(ev, gen.packing, g, 1.0, 500, 11, 2).phat == 1.0);
}

TEST_CASE("monotone coupling in p; reach anti-monotone in r") {
    const auto gen = triangular_disk_lattice(6);
    const auto g = build_graph(gen.packing, 1e-9);
    EventSpec ev = EventSpec::crossing({}, CrossDirection::LeftRight, Color::Open, true);
    ev.side_sets = {side(gen, "left"), side(gen, "right")};
    for (uint64_t trial = 0; trial < 50; ++trial) {
        bool prev_cross = false;
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
            const auto est = monte_carlo(ev, gen.packing, g, p, 1, trial * 7919 + 1, 1);
            const bool hit = est.hits > 0;
            if (prev_cross) CHECK(hit);  // once open, stays open as p grows
            prev_cross = hit;
        }
    }
    // anti-monotone in r for a fixed sample
    const auto sample = sample_sites(g, 0.7, 3, 5);
    bool prev = true;
    for (double r : {0.0, 2.0, 4.0, 6.0, 8.0, 10.0}) {
        const bool hit = reach_event(gen.packing, g, sample, 0, r);
        if (!prev) CHECK_FALSE(hit);
        prev = hit;
    }
}

TEST_CASE("open TB and closed LR crossings exclude each other on tilings") {
    // square tiling by full-width rows of prime square sizes: all interior
    // corners are T-junctions, so at most three squares meet anywhere
    Packing tiling;
    const std::vector<int> divisors = {2, 3, 5, 7, 11};
    double y = 0.0;
    for (int d : divisors) {
        const double side = 1.0 / d;
        for (int i = 0; i < d; ++i)
            tiling.shapes.push_back(Box{{i * side, y}, {side, side}});
        y += side;
    }
    const Rect window{{0.0, 0.0}, {1.0, y}};
    REQUIRE(validate_packing(tiling).ok());
    AdjacencyGraph g = build_graph(tiling, 1e-9);
    for (uint64_t trial = 0; trial < 400; ++trial) {
        const auto s = sample_sites(g, 0.5, 21, trial);
        const bool open_tb =
            crossing_event(tiling, s, window, CrossDirection::TopBottom, Color::Open, false);
        const bool closed_lr =
            crossing_event(tiling, s, window, CrossDirection::LeftRight, Color::Closed, true);
        const bool both = open_tb && closed_lr;
        CHECK_FALSE(both);
    }
}

TEST_CASE("fit_decay contracts") {
    const auto gen = triangular_disk_lattice(12);
    const auto g = build_graph(gen.packing, 1e-9);
    const int s0 = 6 * 12 + 6;
    CHECK_THROWS(fit_decay(gen.packing, g, s0, 0.3, {4.0}, 100, 1));  // single point

    const auto fit = fit_decay(gen.packing, g, s0, 0.30, {2.0, 4.0, 6.0, 8.0}, 4000, 12, 2);
    CHECK(fit.slope < 0.0);
    CHECK(fit.points.size() == 4);

    // all-zero estimates are flagged, not fitted
    CHECK_THROWS(fit_decay(gen.packing, g, s0, 0.001, {4.0, 6.0, 8.0, 10.0}, 200, 3, 2));
}

TEST_CASE("estimate_pc brackets the triangular threshold") {
    const auto gen = triangular_disk_lattice(10);
    const auto g = build_graph(gen.packing, 1e-9);
    EventSpec ev = EventSpec::crossing({}, CrossDirection::LeftRight, Color::Open, true);
    ev.side_sets = {side(gen, "left"), side(gen, "right")};
    PcOptions opt;
    opt.trials = 2000;
    opt.seed = 5;
    opt.bracket_width = 0.02;
    const auto pc = estimate_pc(gen.packing, g, ev, opt);
    CHECK(pc.mid > 0.40);  // duality puts the finite-size threshold near 1/2
    CHECK(pc.mid < 0.60);
    CHECK(pc.hi - pc.lo <= 0.02 + 1e-12);

    // an initial interval that does not bracket the target is rejected
    PcOptions bad = opt;
    bad.p_lo = 0.7;
    bad.p_hi = 0.9;
    CHECK_THROWS(estimate_pc(gen.packing, g, ev, bad));
}

TEST_CASE("wilson interval sanity") {
    const auto [lo0, hi0] = wilson_interval(0, 100);
    CHECK(lo0 == 0.0);
    CHECK(hi0 > 0.0);
    CHECK(hi0 < 0.06);
    const auto [lo1, hi1] = wilson_interval(100, 100);
    CHECK(hi1 == 1.0);
    CHECK(lo1 > 0.94);
    const auto [lo, hi] = wilson_interval(50, 100);
    CHECK(lo == doctest::Approx(0.40383).epsilon(1e-3));
    CHECK(hi == doctest::Approx(0.59617).epsilon(1e-3));
}
