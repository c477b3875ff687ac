#include "packperc/circlepack.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace packperc {

double corner_angle(double rv, double ru, double rw) {
    const double a = rv + ru, b = rv + rw, c = ru + rw;
    double x = (a * a + b * b - c * c) / (2.0 * a * b);
    x = std::clamp(x, -1.0, 1.0);
    return std::acos(x);
}

double angle_sum(const Triangulation& t, const std::vector<double>& radii, int v) {
    const auto& nb = t.map.rot[v];
    const int k = static_cast<int>(nb.size());
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += corner_angle(radii[v], radii[nb[i]], radii[nb[(i + 1) % k]]);
    return sum;
}

namespace {

// d theta / d rv of a single corner (always negative).
double corner_angle_deriv(double rv, double ru, double rw) {
    const double a = rv + ru, b = rv + rw;
    const double alpha = corner_angle(rv, ru, rw);
    const double s = std::sin(alpha);
    if (s < 1e-12) return -1e-12;
    const double dcos = 2.0 * ru * rw * (a + b) / (a * a * b * b);
    return -dcos / s;
}

// Solve theta_v(r) = 2pi for r given fixed neighbor radii.
double solve_vertex(const Triangulation& t, const std::vector<double>& radii, int v) {
    const auto& nb = t.map.rot[v];
    const int k = static_cast<int>(nb.size());
    auto theta = [&](double r) {
        double sum = 0.0;
        for (int i = 0; i < k; ++i) sum += corner_angle(r, radii[nb[i]], radii[nb[(i + 1) % k]]);
        return sum;
    };
    auto dtheta = [&](double r) {
        double sum = 0.0;
        for (int i = 0; i < k; ++i)
            sum += corner_angle_deriv(r, radii[nb[i]], radii[nb[(i + 1) % k]]);
        return sum;
    };
    double lo = radii[v], hi = radii[v];
    while (theta(lo) < 2.0 * M_PI) lo *= 0.5;          // theta increases as r shrinks
    while (theta(hi) > 2.0 * M_PI) hi *= 2.0;
    double r = std::clamp(radii[v], lo, hi);
    for (int it = 0; it < 60; ++it) {
        const double f = theta(r) - 2.0 * M_PI;
        if (std::abs(f) < 1e-15) break;
        if (f > 0.0)
            lo = r;
        else
            hi = r;
        const double step = f / dtheta(r);
        double next = r - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - r) < 1e-17 * r) {
            r = next;
            break;
        }
        r = next;
    }
    return r;
}

}  // namespace

RadiiAssignment compute_radii(const Triangulation& t, const std::vector<double>& boundary_radii,
                              double tol, int max_sweeps) {
    if (boundary_radii.size() != t.boundary.size())
        throw std::invalid_argument("boundary radii must align with the boundary cycle");
    for (double r : boundary_radii)
        if (!(r > 0.0)) throw std::invalid_argument("boundary radii must be positive");

    RadiiAssignment out;
    out.radii.assign(t.n(), 1.0);
    double avg = 0.0;
    for (size_t i = 0; i < t.boundary.size(); ++i) {
        out.radii[t.boundary[i]] = boundary_radii[i];
        avg += boundary_radii[i];
    }
    if (!boundary_radii.empty()) avg /= static_cast<double>(boundary_radii.size());

    std::vector<int> interior;
    for (int v = 0; v < t.n(); ++v)
        if (t.interior(v)) interior.push_back(v);
    if (interior.empty()) {
        out.residual = 0.0;
        return out;
    }
    for (int v : interior) out.radii[v] = avg > 0.0 ? avg : 1.0;

    std::vector<double> next(out.radii);
    std::vector<double> prev_delta(interior.size(), 0.0);
    double prev_norm = 0.0;

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        double norm = 0.0;
        for (size_t i = 0; i < interior.size(); ++i) {
            const int v = interior[i];
            const double r = solve_vertex(t, out.radii, v);
            next[v] = r;
            const double d = std::log(r / out.radii[v]);
            prev_delta[i] = d;
            norm = std::max(norm, std::abs(d));
        }
        for (int v : interior) out.radii[v] = next[v];

        // geometric extrapolation: the synchronous iteration contracts
        // linearly, so extend the step along the current direction
        if (prev_norm > 0.0 && norm > 0.0 && norm < prev_norm) {
            const double rho = norm / prev_norm;
            if (rho > 0.5 && rho < 0.999) {
                const double gain = std::min(rho / (1.0 - rho), 20.0);
                for (size_t i = 0; i < interior.size(); ++i)
                    next[interior[i]] = out.radii[interior[i]] * std::exp(prev_delta[i] * gain);
                double res_before = 0.0, res_after = 0.0;
                for (int v : interior) {
                    res_before = std::max(res_before, std::abs(angle_sum(t, out.radii, v) - 2.0 * M_PI));
                    res_after = std::max(res_after, std::abs(angle_sum(t, next, v) - 2.0 * M_PI));
                }
                if (res_after < res_before)
                    for (int v : interior) out.radii[v] = next[v];
            }
        }
        prev_norm = norm;

        double residual = 0.0;
        for (int v : interior)
            residual = std::max(residual, std::abs(angle_sum(t, out.radii, v) - 2.0 * M_PI));
        out.residual = residual;
        out.sweeps = sweep;
        if (residual < tol) return out;
    }
    throw std::runtime_error("radius iteration did not converge; residual " +
                             std::to_string(out.residual));
}

Packing LayoutPacking::to_packing(double overlap_tol) const {
    Packing p;
    p.dimension = 2;
    p.overlap_tol = overlap_tol;
    p.shapes.reserve(centers.size());
    for (size_t i = 0; i < centers.size(); ++i) p.shapes.push_back(Disk{centers[i], radii[i]});
    return p;
}

LayoutPacking layout(const Triangulation& t, const RadiiAssignment& ra, double fail_tol) {
    const auto& rot = t.map.rot;
    const auto& r = ra.radii;
    const int n = t.n();
    if (static_cast<int>(r.size()) != n) throw std::invalid_argument("radii/vertex count mismatch");

    // corners on the boundary walk cannot be chained across
    std::set<std::pair<int, int>> blocked;  // (vertex, position of incoming neighbor)
    if (!t.boundary.empty()) {
        const int L = static_cast<int>(t.boundary.size());
        for (int i = 0; i < L; ++i) {
            const int x = t.boundary[i];
            const int v = t.boundary[(i + 1) % L];
            const auto& rv = rot[v];
            for (size_t pos = 0; pos < rv.size(); ++pos)
                if (rv[pos] == x) blocked.insert({v, static_cast<int>(pos)});
        }
    }

    LayoutPacking out;
    out.radii = r;
    out.centers.assign(n, {0.0, 0.0});
    std::vector<bool> placed(n, false);

    int root = 0;
    for (int v = 0; v < n; ++v)
        if (t.interior(v)) {
            root = v;
            break;
        }
    placed[root] = true;
    const int first = rot[root][0];
    out.centers[first] = {r[root] + r[first], 0.0};
    placed[first] = true;

    std::deque<std::pair<int, int>> queue = {{root, first}, {first, root}};
    std::vector<std::vector<bool>> corner_done(n);
    for (int v = 0; v < n; ++v) corner_done[v].assign(rot[v].size(), false);
    auto pos_of = [&](int v, int u) {
        const auto& rv = rot[v];
        for (size_t i = 0; i < rv.size(); ++i)
            if (rv[i] == u) return static_cast<int>(i);
        return -1;
    };
    while (!queue.empty()) {
        const auto [u, v] = queue.front();
        queue.pop_front();
        const int pv = pos_of(u, v);
        if (corner_done[u][pv]) continue;
        corner_done[u][pv] = true;
        if (blocked.count({u, pv})) continue;  // outer-face corner
        const int w = rot[u][(pv + 1) % rot[u].size()];
        if (!placed[w]) {
            const double base =
                std::atan2(out.centers[v][1] - out.centers[u][1], out.centers[v][0] - out.centers[u][0]);
            const double ang = base + corner_angle(r[u], r[v], r[w]);
            out.centers[w] = {out.centers[u][0] + (r[u] + r[w]) * std::cos(ang),
                              out.centers[u][1] + (r[u] + r[w]) * std::sin(ang)};
            placed[w] = true;
            queue.push_back({w, u});
        }
        queue.push_back({u, w});
    }

    for (int v = 0; v < n; ++v)
        if (!placed[v]) throw std::runtime_error("layout could not reach vertex " + std::to_string(v));

    for (int u = 0; u < n; ++u) {
        for (int v : rot[u]) {
            if (v < u) continue;
            const double dx = out.centers[u][0] - out.centers[v][0];
            const double dy = out.centers[u][1] - out.centers[v][1];
            const double want = r[u] + r[v];
            const double rel = std::abs(std::sqrt(dx * dx + dy * dy) - want) / want;
            if (rel > out.max_residual) {
                out.max_residual = rel;
                out.worst_u = u;
                out.worst_v = v;
            }
        }
    }
    if (out.max_residual > fail_tol)
        throw std::runtime_error("layout residual " + std::to_string(out.max_residual) +
                                 " on edge (" + std::to_string(out.worst_u) + "," +
                                 std::to_string(out.worst_v) + ") exceeds threshold");
    return out;
}

std::map<int, double> ring_audit(const Triangulation& t, const std::vector<double>& radii) {
    std::map<int, double> out;
    for (int v = 0; v < t.n(); ++v) {
        if (!t.interior(v)) continue;
        double worst = std::numeric_limits<double>::infinity();
        for (int u : t.map.rot[v]) worst = std::min(worst, radii[u] / radii[v]);
        const int deg = t.degree(v);
        auto it = out.find(deg);
        if (it == out.end())
            out[deg] = worst;
        else
            it->second = std::min(it->second, worst);
    }
    return out;
}

std::string layout_to_svg(const LayoutPacking& l) {
    double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    for (size_t i = 0; i < l.centers.size(); ++i) {
        lo_x = std::min(lo_x, l.centers[i][0] - l.radii[i]);
        hi_x = std::max(hi_x, l.centers[i][0] + l.radii[i]);
        lo_y = std::min(lo_y, l.centers[i][1] - l.radii[i]);
        hi_y = std::max(hi_y, l.centers[i][1] + l.radii[i]);
    }
    const double pad = 0.02 * std::max(hi_x - lo_x, hi_y - lo_y);
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << lo_x - pad << " " << lo_y - pad
        << " " << (hi_x - lo_x + 2 * pad) << " " << (hi_y - lo_y + 2 * pad) << "\">\n";
    for (size_t i = 0; i < l.centers.size(); ++i)
        svg << "  <circle cx=\"" << l.centers[i][0] << "\" cy=\"" << l.centers[i][1] << "\" r=\""
            << l.radii[i] << "\" fill=\"none\" stroke=\"black\" stroke-width=\""
            << 0.002 * (hi_x - lo_x) << "\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace packperc
