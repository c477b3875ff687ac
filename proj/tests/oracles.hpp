#pragma once

// Brute-force reference computations kept independent of the library's
// geometry paths: tests freeze expected values produced by these.

#include <algorithm>
#include <cmath>
#include <vector>

#include "packperc/geometry.hpp"

namespace oracle {

using packperc::Shape;
using packperc::Vec2;

// Dense boundary polyline of a 2d shape.
inline std::vector<Vec2> boundary_samples(const Shape& s, int count) {
    std::vector<Vec2> pts;
    pts.reserve(count);
    if (const auto* d = std::get_if<packperc::Disk>(&s)) {
        for (int k = 0; k < count; ++k) {
            const double t = 2.0 * M_PI * k / count;
            pts.push_back({d->center[0] + d->radius * std::cos(t),
                           d->center[1] + d->radius * std::sin(t)});
        }
    } else if (const auto* b = std::get_if<packperc::Box>(&s)) {
        const int per = count / 4;
        for (int k = 0; k < per; ++k) {
            const double t = static_cast<double>(k) / per;
            pts.push_back({b->lo[0] + t * b->sides[0], b->lo[1]});
            pts.push_back({b->lo[0] + b->sides[0], b->lo[1] + t * b->sides[1]});
            pts.push_back({b->lo[0] + (1 - t) * b->sides[0], b->lo[1] + b->sides[1]});
            pts.push_back({b->lo[0], b->lo[1] + (1 - t) * b->sides[1]});
        }
    } else {
        const auto& e = std::get<packperc::Ellipse>(s);
        const double c = std::cos(e.angle), sn = std::sin(e.angle);
        for (int k = 0; k < count; ++k) {
            const double t = 2.0 * M_PI * k / count;
            const double x = e.a * std::cos(t), y = e.b * std::sin(t);
            pts.push_back({e.center[0] + x * c - y * sn, e.center[1] + x * sn + y * c});
        }
    }
    return pts;
}

// sup-norm diameter by pairwise maximization over boundary samples
inline double diameter_sampled(const Shape& s, int count = 2048) {
    const auto pts = boundary_samples(s, count);
    double best = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, std::max(std::abs(pts[i][0] - pts[j][0]),
                                           std::abs(pts[i][1] - pts[j][1])));
    return best;
}

// sup-norm set distance by minimization over boundary sample pairs
inline double set_distance_sampled(const Shape& a, const Shape& b, int count = 1024) {
    const auto pa = boundary_samples(a, count);
    const auto pb = boundary_samples(b, count);
    double best = 1e300;
    for (const auto& x : pa)
        for (const auto& y : pb)
            best = std::min(best, std::max(std::abs(x[0] - y[0]), std::abs(x[1] - y[1])));
    return best;
}

// Monte Carlo area over the bounding box
inline double area_sampled(const Shape& s, int samples = 2000000) {
    const auto bb = packperc::bounding_box(s);
    const double w = bb.hi[0] - bb.lo[0], h = bb.hi[1] - bb.lo[1];
    auto inside = [&](double x, double y) {
        if (const auto* d = std::get_if<packperc::Disk>(&s)) {
            const double dx = x - d->center[0], dy = y - d->center[1];
            return dx * dx + dy * dy <= d->radius * d->radius;
        }
        if (const auto* b = std::get_if<packperc::Box>(&s))
            return x >= b->lo[0] && x <= b->lo[0] + b->sides[0] && y >= b->lo[1] &&
                   y <= b->lo[1] + b->sides[1];
        const auto& e = std::get<packperc::Ellipse>(s);
        const double c = std::cos(e.angle), sn = std::sin(e.angle);
        const double rx = (x - e.center[0]) * c + (y - e.center[1]) * sn;
        const double ry = -(x - e.center[0]) * sn + (y - e.center[1]) * c;
        return (rx / e.a) * (rx / e.a) + (ry / e.b) * (ry / e.b) <= 1.0;
    };
    // low-discrepancy lattice; deterministic
    int hit = 0;
    const double g1 = 0.7548776662466927, g2 = 0.5698402909980532;
    double u = 0.5, v = 0.5;
    for (int k = 0; k < samples; ++k) {
        u += g1;
        if (u >= 1) u -= 1;
        v += g2;
        if (v >= 1) v -= 1;
        if (inside(bb.lo[0] + u * w, bb.lo[1] + v * h)) ++hit;
    }
    return w * h * static_cast<double>(hit) / samples;
}

// circle through three points
inline void circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, Vec2& center,
                         double& radius) {
    const double d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    const double a2 = a[0] * a[0] + a[1] * a[1];
    const double b2 = b[0] * b[0] + b[1] * b[1];
    const double c2 = c[0] * c[0] + c[1] * c[1];
    center[0] = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
    center[1] = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
    radius = std::hypot(a[0] - center[0], a[1] - center[1]);
}

}  // namespace oracle
