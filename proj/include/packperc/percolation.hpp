#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "packperc/geometry.hpp"
#include "packperc/graph.hpp"

namespace packperc {

enum class Mode { Site, Bond };
enum class CrossDirection { LeftRight, TopBottom };
enum class Color { Open, Closed };

/// Open/closed status per shape index.  Bits are a pure function of
/// (seed, trial, index, p): thresholding one counter-based uniform per index,
/// so samples are identical for any thread count and monotone-coupled in p.
struct SiteSample {
    std::vector<uint8_t> open;
    double p = 0.0;
    uint64_t seed = 0;
    uint64_t trial = 0;
};

/// Same contract per edge of an adjacency graph (edge ids index
/// AdjacencyGraph::edges).
struct BondSample {
    std::vector<uint8_t> open;
    double p = 0.0;
    uint64_t seed = 0;
    uint64_t trial = 0;
};

double site_uniform(uint64_t seed, uint64_t trial, uint64_t index);
double bond_uniform(uint64_t seed, uint64_t trial, uint64_t index);

SiteSample sample_sites(const AdjacencyGraph& g, double p, uint64_t seed, uint64_t trial);
BondSample sample_bonds(const AdjacencyGraph& g, double p, uint64_t seed, uint64_t trial);

struct Rect {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{1.0, 1.0};
};

struct EventSpec {
    enum class Kind { ReachDistance, ReachAnyOf, Crossing };
    Kind kind = Kind::ReachDistance;
    Mode mode = Mode::Site;
    std::string label;

    // ReachDistance / ReachAnyOf
    int source = 0;
    double r = 0.0;
    std::vector<int> targets;

    // Crossing
    Rect window;
    CrossDirection direction = CrossDirection::LeftRight;
    Color color = Color::Open;
    bool diagonal = true;
    double side_tol = 1e-9;  // relative: shape touches a side iff within tol * diam
    // Optional explicit side membership (start set, goal set); used for
    // families whose natural boundary is not an axis-aligned window side.
    std::optional<std::pair<std::vector<int>, std::vector<int>>> side_sets;

    static EventSpec reach(int source, double r, Mode mode = Mode::Site);
    static EventSpec reach_any(int source, std::vector<int> targets, Mode mode = Mode::Site);
    static EventSpec crossing(Rect window, CrossDirection dir, Color color, bool diagonal,
                              Mode mode = Mode::Site);
};

/// True iff s0 is open and some open shape at l-infinity distance >= r from
/// s0 is connected to it through open shapes.  A finite window stands in for
/// the unbounded event; callers report the window radius they used.
bool reach_event(const Packing& p, const AdjacencyGraph& g, const SiteSample& sample, int s0,
                 double r);

/// True iff shapes of the requested color connect the two opposite window
/// sides, consecutive shapes intersecting; four-corner box contacts join the
/// path only when `diagonal` is set.
bool crossing_event(const Packing& p, const SiteSample& sample, const Rect& window,
                    CrossDirection direction, Color color, bool diagonal, double side_tol = 1e-9);

struct Estimate {
    std::string event;
    double p = 0.0;
    uint64_t trials = 0;
    uint64_t hits = 0;
    double phat = 0.0;
    double ci_lo = 0.0;  // 95% Wilson
    double ci_hi = 0.0;
    uint64_t seed = 0;
    double wall_seconds = 0.0;
};

/// 95% Wilson score interval.
std::pair<double, double> wilson_interval(uint64_t hits, uint64_t trials);

/// Number of workers: explicit request, else PACKPERC_THREADS, else hardware.
int resolve_workers(int requested = 0);

/// Monte Carlo estimate of the event probability; trials are distributed over
/// workers with per-trial keying, so the estimate is identical for any
/// worker count.
Estimate monte_carlo(const EventSpec& event, const Packing& p, const AdjacencyGraph& g,
                     double prob, uint64_t trials, uint64_t seed, int workers = 0);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<Estimate> points;
};

/// Estimates P(reach r) on a grid of r values in one pass and fits
/// log(phat) against r by least squares.
DecayFit fit_decay(const Packing& p, const AdjacencyGraph& g, int s0, double prob,
                   const std::vector<double>& r_grid, uint64_t trials, uint64_t seed,
                   int workers = 0);

struct PcOptions {
    double p_lo = 0.05;
    double p_hi = 0.95;
    double target = 0.5;
    double bracket_width = 0.01;
    uint64_t trials = 10000;
    uint64_t seed = 1;
    int workers = 0;
};

struct PcResult {
    double lo = 0.0;
    double hi = 1.0;
    double mid = 0.5;
    std::vector<std::pair<double, double>> probes;  // (p, phat)
};

/// Bisection of a monotone crossing proxy against the target probability.
/// All probes reuse the same uniforms, so the empirical proxy is exactly
/// monotone in p and the bracket is deterministic.
PcResult estimate_pc(const Packing& p, const AdjacencyGraph& g, const EventSpec& proxy,
                     const PcOptions& opt);

}  // namespace packperc
