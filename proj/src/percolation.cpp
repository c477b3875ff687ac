#include "packperc/percolation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "packperc/rng.hpp"
#include "packperc/spatial_index.hpp"

namespace packperc {

double site_uniform(uint64_t seed, uint64_t trial, uint64_t index) {
    return uniform01(seed, RngStream::Site, trial, index);
}

double bond_uniform(uint64_t seed, uint64_t trial, uint64_t index) {
    return uniform01(seed, RngStream::Bond, trial, index);
}

SiteSample sample_sites(const AdjacencyGraph& g, double p, uint64_t seed, uint64_t trial) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    SiteSample s;
    s.p = p;
    s.seed = seed;
    s.trial = trial;
    s.open.resize(g.n);
    for (int i = 0; i < g.n; ++i) s.open[i] = site_uniform(seed, trial, i) < p ? 1 : 0;
    return s;
}

BondSample sample_bonds(const AdjacencyGraph& g, double p, uint64_t seed, uint64_t trial) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    BondSample s;
    s.p = p;
    s.seed = seed;
    s.trial = trial;
    s.open.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) s.open[e] = bond_uniform(seed, trial, e) < p ? 1 : 0;
    return s;
}

EventSpec EventSpec::reach(int source, double r, Mode mode) {
    EventSpec e;
    e.kind = Kind::ReachDistance;
    e.mode = mode;
    e.source = source;
    e.r = r;
    e.label = "reach";
    return e;
}

EventSpec EventSpec::reach_any(int source, std::vector<int> targets, Mode mode) {
    EventSpec e;
    e.kind = Kind::ReachAnyOf;
    e.mode = mode;
    e.source = source;
    e.targets = std::move(targets);
    e.label = "reach_any";
    return e;
}

EventSpec EventSpec::crossing(Rect window, CrossDirection dir, Color color, bool diagonal,
                              Mode mode) {
    EventSpec e;
    e.kind = Kind::Crossing;
    e.mode = mode;
    e.window = window;
    e.direction = dir;
    e.color = color;
    e.diagonal = diagonal;
    e.label = "crossing";
    return e;
}

namespace {

// Scratch space for repeated BFS runs without per-trial allocation.
struct Bfs {
    std::vector<int> stamp;
    std::vector<int> stack;
    int epoch = 0;

    explicit Bfs(int n) : stamp(n, -1) { stack.reserve(n); }

    void begin() {
        ++epoch;
        stack.clear();
    }
    bool seen(int v) const { return stamp[v] == epoch; }
    void visit(int v) {
        stamp[v] = epoch;
        stack.push_back(v);
    }
};

// Adjacency + side sets for crossing evaluation, built once per event.
struct CrossingContext {
    std::vector<int> offsets, neighbors, edge_ids;
    std::vector<int> start, goal;
};

bool box_corner_contact(const Box& a, const Box& b, double tol) {
    for (int k = 0; k < 2; ++k) {
        const double ov = std::min(a.lo[k] + a.sides[k], b.lo[k] + b.sides[k]) -
                          std::max(a.lo[k], b.lo[k]);
        if (ov > tol) return false;  // positive-length contact on this axis
    }
    return true;
}

CrossingContext build_crossing_context(const Packing& p, const AdjacencyGraph* g,
                                       const EventSpec& ev) {
    CrossingContext ctx;
    const int n = static_cast<int>(p.shapes.size());
    std::vector<double> diams(n);
    for (int i = 0; i < n; ++i) diams[i] = diameter(p.shapes[i]);

    std::vector<std::vector<int>> adj(n);
    std::vector<std::vector<int>> ids(n);
    int edge_counter = 0;
    auto consider = [&](int i, int j) {
        const double tol = ev.side_tol * std::max(diams[i], diams[j]);
        if (set_distance(p.shapes[i], p.shapes[j]) > tol) return;
        if (!ev.diagonal) {
            const auto* bi = std::get_if<Box>(&p.shapes[i]);
            const auto* bj = std::get_if<Box>(&p.shapes[j]);
            if (bi && bj && box_corner_contact(*bi, *bj, tol)) return;
        }
        adj[i].push_back(j);
        ids[i].push_back(edge_counter);
        adj[j].push_back(i);
        ids[j].push_back(edge_counter);
        ++edge_counter;
    };

    if (g != nullptr && ev.diagonal) {
        // reuse the prebuilt graph: the bond sample indexes its edge ids
        ctx.offsets = g->offsets;
        ctx.neighbors = g->neighbors;
        ctx.edge_ids = g->edge_ids;
    } else {
        double max_d = 0.0;
        for (double d : diams) max_d = std::max(max_d, d);
        SpatialIndex index(p, SpatialIndex::default_cell_size(p), 0.5 * ev.side_tol * max_d);
        index.for_each_candidate_pair(consider);
        ctx.offsets.assign(n + 1, 0);
        for (int i = 0; i < n; ++i) ctx.offsets[i + 1] = ctx.offsets[i] + static_cast<int>(adj[i].size());
        ctx.neighbors.resize(ctx.offsets[n]);
        ctx.edge_ids.resize(ctx.offsets[n]);
        for (int i = 0; i < n; ++i)
            for (size_t k = 0; k < adj[i].size(); ++k) {
                ctx.neighbors[ctx.offsets[i] + static_cast<int>(k)] = adj[i][k];
                ctx.edge_ids[ctx.offsets[i] + static_cast<int>(k)] = ids[i][k];
            }
    }

    if (ev.side_sets) {
        ctx.start = ev.side_sets->first;
        ctx.goal = ev.side_sets->second;
    } else {
        const int axis = ev.direction == CrossDirection::LeftRight ? 0 : 1;
        for (int i = 0; i < n; ++i) {
            const Aabb bb = bounding_box(p.shapes[i]);
            const double tol = ev.side_tol * diams[i];
            if (bb.lo[axis] <= ev.window.lo[axis] + tol) ctx.start.push_back(i);
            if (bb.hi[axis] >= ev.window.hi[axis] - tol) ctx.goal.push_back(i);
        }
    }
    return ctx;
}

// Connectivity from the start set to the goal set over eligible vertices /
// open edges.  `site_ok(v)` gates vertices; `edge_ok(e)` gates edges.
template <typename SiteOk, typename EdgeOk>
bool set_to_set_connected(const CrossingContext& ctx, Bfs& bfs, SiteOk&& site_ok,
                          EdgeOk&& edge_ok, const std::vector<char>& is_goal) {
    bfs.begin();
    size_t head = 0;
    for (int v : ctx.start) {
        if (!site_ok(v) || bfs.seen(v)) continue;
        if (is_goal[v]) return true;
        bfs.visit(v);
    }
    for (head = 0; head < bfs.stack.size(); ++head) {
        const int v = bfs.stack[head];
        for (int k = ctx.offsets[v]; k < ctx.offsets[v + 1]; ++k) {
            const int w = ctx.neighbors[k];
            if (bfs.seen(w) || !site_ok(w) || !edge_ok(ctx.edge_ids[k])) continue;
            if (is_goal[w]) return true;
            bfs.visit(w);
        }
    }
    return false;
}

}  // namespace

bool reach_event(const Packing& p, const AdjacencyGraph& g, const SiteSample& sample, int s0,
                 double r) {
    if (s0 < 0 || s0 >= g.n) throw std::invalid_argument("source index out of range");
    if (!sample.open[s0]) return false;
    Bfs bfs(g.n);
    bfs.begin();
    bfs.visit(s0);
    if (r <= 0.0) return true;
    for (size_t head = 0; head < bfs.stack.size(); ++head) {
        const int v = bfs.stack[head];
        if (v != s0 && set_distance(p.shapes[s0], p.shapes[v]) >= r) return true;
        for (int k = g.offsets[v]; k < g.offsets[v + 1]; ++k) {
            const int w = g.neighbors[k];
            if (!bfs.seen(w) && sample.open[w]) bfs.visit(w);
        }
    }
    return false;
}

bool crossing_event(const Packing& p, const SiteSample& sample, const Rect& window,
                    CrossDirection direction, Color color, bool diagonal, double side_tol) {
    EventSpec ev = EventSpec::crossing(window, direction, color, diagonal);
    ev.side_tol = side_tol;
    CrossingContext ctx = build_crossing_context(p, nullptr, ev);
    std::vector<char> is_goal(p.shapes.size(), 0);
    for (int v : ctx.goal) is_goal[v] = 1;
    Bfs bfs(static_cast<int>(p.shapes.size()));
    const uint8_t want = color == Color::Open ? 1 : 0;
    return set_to_set_connected(
        ctx, bfs, [&](int v) { return sample.open[v] == want; }, [](int) { return true; }, is_goal);
}

std::pair<double, double> wilson_interval(uint64_t hits, uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(hits) / n;
    const double denom = 1.0 + z * z / n;
    const double center = (phat + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
    const double lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = hits == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PACKPERC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Per-trial event evaluation shared by monte_carlo and estimate_pc.
class Evaluator {
  public:
    Evaluator(const EventSpec& ev, const Packing& p, const AdjacencyGraph& g)
        : ev_(ev), g_(g), n_(g.n) {
        if (ev.kind == EventSpec::Kind::ReachDistance) {
            dists_ = source_distances(p, ev.source);
        } else if (ev.kind == EventSpec::Kind::ReachAnyOf) {
            is_target_.assign(n_, 0);
            for (int t : ev.targets) is_target_[t] = 1;
        } else {
            ctx_ = build_crossing_context(p, &g, ev);
            is_goal_.assign(n_, 0);
            for (int v : ctx_.goal) is_goal_[v] = 1;
        }
    }

    // One indicator evaluation; open bits are generated inline from the
    // counter RNG, so no sample buffers are shared between workers.
    bool run(double prob, uint64_t seed, uint64_t trial, Bfs& bfs) const {
        switch (ev_.kind) {
            case EventSpec::Kind::ReachDistance:
                return run_reach(prob, seed, trial, bfs);
            case EventSpec::Kind::ReachAnyOf:
                return run_reach_any(prob, seed, trial, bfs);
            case EventSpec::Kind::Crossing:
                return run_crossing(prob, seed, trial, bfs);
        }
        return false;
    }

    // Largest source distance reached by the open cluster; -1 if the source
    // itself is closed.
    double reach_extent(double prob, uint64_t seed, uint64_t trial, Bfs& bfs) const {
        double best = -1.0;
        run_reach(prob, seed, trial, bfs, &best);
        return best;
    }

    const std::vector<double>& dists() const { return dists_; }

    static std::vector<double> source_distances(const Packing& p, int s0) {
        std::vector<double> d(p.shapes.size(), 0.0);
        for (size_t i = 0; i < p.shapes.size(); ++i)
            if (static_cast<int>(i) != s0) d[i] = set_distance(p.shapes[s0], p.shapes[i]);
        return d;
    }

  private:
    bool site_open(double prob, uint64_t seed, uint64_t trial, int v) const {
        return site_uniform(seed, trial, v) < prob;
    }
    bool bond_open(double prob, uint64_t seed, uint64_t trial, int e) const {
        return bond_uniform(seed, trial, e) < prob;
    }

    bool run_reach(double prob, uint64_t seed, uint64_t trial, Bfs& bfs,
                   double* extent = nullptr) const {
        const bool site_mode = ev_.mode == Mode::Site;
        if (site_mode && !site_open(prob, seed, trial, ev_.source)) {
            if (extent != nullptr) *extent = -1.0;
            return false;
        }
        bfs.begin();
        bfs.visit(ev_.source);
        double best = 0.0;
        for (size_t head = 0; head < bfs.stack.size(); ++head) {
            const int v = bfs.stack[head];
            if (v != ev_.source) {
                best = std::max(best, dists_[v]);
                if (extent == nullptr && best >= ev_.r && ev_.r > 0.0) return true;
            }
            for (int k = g_.offsets[v]; k < g_.offsets[v + 1]; ++k) {
                const int w = g_.neighbors[k];
                if (bfs.seen(w)) continue;
                if (site_mode ? site_open(prob, seed, trial, w)
                              : bond_open(prob, seed, trial, g_.edge_ids[k]))
                    bfs.visit(w);
            }
        }
        if (extent != nullptr) *extent = best;
        return ev_.r <= 0.0 || best >= ev_.r;
    }

    bool run_reach_any(double prob, uint64_t seed, uint64_t trial, Bfs& bfs) const {
        const bool site_mode = ev_.mode == Mode::Site;
        if (site_mode && !site_open(prob, seed, trial, ev_.source)) return false;
        if (is_target_[ev_.source]) return true;
        bfs.begin();
        bfs.visit(ev_.source);
        for (size_t head = 0; head < bfs.stack.size(); ++head) {
            const int v = bfs.stack[head];
            for (int k = g_.offsets[v]; k < g_.offsets[v + 1]; ++k) {
                const int w = g_.neighbors[k];
                if (bfs.seen(w)) continue;
                if (site_mode ? !site_open(prob, seed, trial, w)
                              : !bond_open(prob, seed, trial, g_.edge_ids[k]))
                    continue;
                if (is_target_[w]) return true;
                bfs.visit(w);
            }
        }
        return false;
    }

    bool run_crossing(double prob, uint64_t seed, uint64_t trial, Bfs& bfs) const {
        const uint8_t want = ev_.color == Color::Open ? 1 : 0;
        auto site_ok = [&](int v) {
            if (ev_.mode == Mode::Bond) return true;
            return (site_uniform(seed, trial, v) < prob ? 1 : 0) == want;
        };
        auto edge_ok = [&](int e) {
            if (ev_.mode == Mode::Site) return true;
            return (bond_uniform(seed, trial, e) < prob ? 1 : 0) == want;
        };
        return set_to_set_connected(ctx_, bfs, site_ok, edge_ok, is_goal_);
    }

    EventSpec ev_;
    const AdjacencyGraph& g_;
    int n_;
    std::vector<double> dists_;
    std::vector<uint8_t> is_target_;
    std::vector<char> is_goal_;
    CrossingContext ctx_;
};

uint64_t parallel_hit_count(const Evaluator& eval, int n, double prob, uint64_t trials,
                            uint64_t seed, int workers) {
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<uint64_t>(trials, 1))));
    std::vector<uint64_t> hits(workers, 0);
    auto work = [&](int w) {
        Bfs bfs(n);
        uint64_t local = 0;
        for (uint64_t t = w; t < trials; t += static_cast<uint64_t>(workers))
            if (eval.run(prob, seed, t, bfs)) ++local;
        hits[w] = local;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    uint64_t total = 0;
    for (uint64_t h : hits) total += h;
    return total;
}

}  // namespace

Estimate monte_carlo(const EventSpec& event, const Packing& p, const AdjacencyGraph& g,
                     double prob, uint64_t trials, uint64_t seed, int workers) {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    const auto t0 = std::chrono::steady_clock::now();
    Evaluator eval(event, p, g);
    const uint64_t hits = parallel_hit_count(eval, g.n, prob, trials, seed, resolve_workers(workers));
    Estimate est;
    est.event = event.label;
    est.p = prob;
    est.trials = trials;
    est.hits = hits;
    est.phat = static_cast<double>(hits) / static_cast<double>(trials);
    std::tie(est.ci_lo, est.ci_hi) = wilson_interval(hits, trials);
    est.seed = seed;
    est.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return est;
}

DecayFit fit_decay(const Packing& p, const AdjacencyGraph& g, int s0, double prob,
                   const std::vector<double>& r_grid, uint64_t trials, uint64_t seed, int workers) {
    if (r_grid.size() < 4)
        throw std::invalid_argument("fit_decay needs at least 4 grid points");
    EventSpec ev = EventSpec::reach(s0, 0.0);
    Evaluator eval(ev, p, g);

    const int nw = std::max(1, resolve_workers(workers));
    std::vector<std::vector<uint64_t>> counts(nw, std::vector<uint64_t>(r_grid.size(), 0));
    auto work = [&](int w) {
        Bfs bfs(g.n);
        for (uint64_t t = w; t < trials; t += static_cast<uint64_t>(nw)) {
            const double extent = eval.reach_extent(prob, seed, t, bfs);
            if (extent < 0.0) continue;  // source closed
            for (size_t i = 0; i < r_grid.size(); ++i)
                if (extent >= r_grid[i]) ++counts[w][i];
        }
    };
    if (nw == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    DecayFit fit;
    std::vector<double> xs, ys;
    for (size_t i = 0; i < r_grid.size(); ++i) {
        uint64_t hits = 0;
        for (int w = 0; w < nw; ++w) hits += counts[w][i];
        Estimate est;
        est.event = "reach";
        est.p = prob;
        est.trials = trials;
        est.hits = hits;
        est.phat = static_cast<double>(hits) / static_cast<double>(trials);
        std::tie(est.ci_lo, est.ci_hi) = wilson_interval(hits, trials);
        est.seed = seed;
        fit.points.push_back(est);
        if (hits > 0) {
            xs.push_back(r_grid[i]);
            ys.push_back(std::log(est.phat));
        }
    }
    if (xs.size() < 4)
        throw std::runtime_error("undetectable at this p/trials: fewer than 4 nonzero estimates");

    const size_t m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = m * sxx - sx * sx;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / m;
    for (size_t i = 0; i < m; ++i) {
        const double fit_y = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - fit_y) * (ys[i] - fit_y);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

PcResult estimate_pc(const Packing& p, const AdjacencyGraph& g, const EventSpec& proxy,
                     const PcOptions& opt) {
    Evaluator eval(proxy, p, g);
    const int workers = resolve_workers(opt.workers);
    auto prob_at = [&](double prob) {
        const uint64_t hits = parallel_hit_count(eval, g.n, prob, opt.trials, opt.seed, workers);
        return static_cast<double>(hits) / static_cast<double>(opt.trials);
    };
    PcResult out;
    double f_lo = prob_at(opt.p_lo), f_hi = prob_at(opt.p_hi);
    out.probes.push_back({opt.p_lo, f_lo});
    out.probes.push_back({opt.p_hi, f_hi});
    if (!(f_lo < opt.target && f_hi > opt.target))
        throw std::runtime_error("initial interval does not bracket the target probability");
    double lo = opt.p_lo, hi = opt.p_hi;
    while (hi - lo > opt.bracket_width) {
        const double mid = 0.5 * (lo + hi);
        const double f = prob_at(mid);
        out.probes.push_back({mid, f});
        if (f < opt.target)
            lo = mid;
        else
            hi = mid;
    }
    out.lo = lo;
    out.hi = hi;
    out.mid = 0.5 * (lo + hi);
    return out;
}

}  // namespace packperc
