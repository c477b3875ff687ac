#include "packperc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "packperc/spatial_index.hpp"

namespace packperc {

namespace {

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
double norm2(const Vec2& a) { return std::sqrt(dot(a, a)); }
Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

void check_shape(const Shape& s, int packing_dim) {
    if (const auto* d = std::get_if<Disk>(&s)) {
        if (!(d->radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
        if (packing_dim != 2) throw std::invalid_argument("disks require dimension 2");
    } else if (const auto* b = std::get_if<Box>(&s)) {
        if (b->lo.size() != b->sides.size() || b->lo.empty())
            throw std::invalid_argument("box corner/side arity mismatch");
        for (double s_k : b->sides)
            if (!(s_k > 0.0)) throw std::invalid_argument("box sides must be positive");
        if (static_cast<int>(b->lo.size()) != packing_dim)
            throw std::invalid_argument("box dimension does not match packing dimension");
    } else if (const auto* e = std::get_if<Ellipse>(&s)) {
        if (!(e->b > 0.0) || !(e->a >= e->b))
            throw std::invalid_argument("ellipse requires a >= b > 0");
        if (packing_dim != 2) throw std::invalid_argument("ellipses require dimension 2");
    }
}

// Half-extents of an ellipse along the coordinate axes (support values).
Vec2 ellipse_half_extents(const Ellipse& e) {
    const double c = std::cos(e.angle), s = std::sin(e.angle);
    const double hx = std::sqrt(e.a * e.a * c * c + e.b * e.b * s * s);
    const double hy = std::sqrt(e.a * e.a * s * s + e.b * e.b * c * c);
    return {hx, hy};
}

}  // namespace

int shape_dimension(const Shape& s) {
    if (const auto* b = std::get_if<Box>(&s)) return static_cast<int>(b->lo.size());
    return 2;
}

double diameter(const Shape& s) {
    if (const auto* d = std::get_if<Disk>(&s)) return 2.0 * d->radius;
    if (const auto* b = std::get_if<Box>(&s)) return *std::max_element(b->sides.begin(), b->sides.end());
    const auto& e = std::get<Ellipse>(s);
    const Vec2 h = ellipse_half_extents(e);
    return 2.0 * std::max(h[0], h[1]);
}

Aabb bounding_box(const Shape& s) {
    Aabb out;
    if (const auto* d = std::get_if<Disk>(&s)) {
        out.lo = {d->center[0] - d->radius, d->center[1] - d->radius};
        out.hi = {d->center[0] + d->radius, d->center[1] + d->radius};
    } else if (const auto* b = std::get_if<Box>(&s)) {
        out.lo = b->lo;
        out.hi.resize(b->lo.size());
        for (size_t k = 0; k < b->lo.size(); ++k) out.hi[k] = b->lo[k] + b->sides[k];
    } else {
        const auto& e = std::get<Ellipse>(s);
        const Vec2 h = ellipse_half_extents(e);
        out.lo = {e.center[0] - h[0], e.center[1] - h[1]};
        out.hi = {e.center[0] + h[0], e.center[1] + h[1]};
    }
    return out;
}

double volume(const Shape& s) {
    if (const auto* d = std::get_if<Disk>(&s)) return M_PI * d->radius * d->radius;
    if (const auto* b = std::get_if<Box>(&s)) {
        double v = 1.0;
        for (double side : b->sides) v *= side;
        return v;
    }
    const auto& e = std::get<Ellipse>(s);
    return M_PI * e.a * e.b;
}

Shape scaled(const Shape& s, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    if (const auto* d = std::get_if<Disk>(&s))
        return Disk{{d->center[0] * factor, d->center[1] * factor}, d->radius * factor};
    if (const auto* b = std::get_if<Box>(&s)) {
        Box out = *b;
        for (auto& x : out.lo) x *= factor;
        for (auto& x : out.sides) x *= factor;
        return out;
    }
    const auto& e = std::get<Ellipse>(s);
    return Ellipse{{e.center[0] * factor, e.center[1] * factor}, e.a * factor, e.b * factor, e.angle};
}

Packing scaled(const Packing& p, double factor) {
    Packing out = p;
    for (auto& s : out.shapes) s = scaled(s, factor);
    return out;
}

Vec2 center_point(const Shape& s) {
    if (const auto* d = std::get_if<Disk>(&s)) return d->center;
    if (const auto* b = std::get_if<Box>(&s))
        return {b->lo[0] + 0.5 * b->sides[0], b->lo[1] + 0.5 * b->sides[1]};
    return std::get<Ellipse>(s).center;
}

double support_value(const Shape& s, const Vec2& u) {
    if (const auto* d = std::get_if<Disk>(&s)) return dot(d->center, u) + d->radius * norm2(u);
    if (const auto* b = std::get_if<Box>(&s)) {
        double v = 0.0;
        for (int k = 0; k < 2; ++k) v += std::max(b->lo[k] * u[k], (b->lo[k] + b->sides[k]) * u[k]);
        return v;
    }
    const auto& e = std::get<Ellipse>(s);
    const double c = std::cos(e.angle), sn = std::sin(e.angle);
    const double p1 = e.a * (u[0] * c + u[1] * sn);
    const double p2 = e.b * (-u[0] * sn + u[1] * c);
    return dot(e.center, u) + std::sqrt(p1 * p1 + p2 * p2);
}

Vec2 support_point(const Shape& s, const Vec2& u) {
    if (const auto* d = std::get_if<Disk>(&s)) {
        const double n = norm2(u);
        if (n == 0.0) return d->center;
        return {d->center[0] + d->radius * u[0] / n, d->center[1] + d->radius * u[1] / n};
    }
    if (const auto* b = std::get_if<Box>(&s)) {
        Vec2 out;
        for (int k = 0; k < 2; ++k) out[k] = u[k] >= 0.0 ? b->lo[k] + b->sides[k] : b->lo[k];
        return out;
    }
    const auto& e = std::get<Ellipse>(s);
    const double c = std::cos(e.angle), sn = std::sin(e.angle);
    // w = M^T u in the frame where the ellipse is a unit disk, M = R diag(a,b).
    const double w1 = e.a * (u[0] * c + u[1] * sn);
    const double w2 = e.b * (-u[0] * sn + u[1] * c);
    const double n = std::sqrt(w1 * w1 + w2 * w2);
    if (n == 0.0) return e.center;
    const double z1 = w1 / n, z2 = w2 / n;
    return {e.center[0] + e.a * z1 * c - e.b * z2 * sn, e.center[1] + e.a * z1 * sn + e.b * z2 * c};
}

namespace {

// ---- closed-form l-infinity distances -----------------------------------

// Distance in l-infinity from the origin to the Euclidean ball B(c, R):
// smallest t with box([-t,t]^2) meeting the ball.
double linf_point_to_ball(const Vec2& c, double R) {
    const double x = std::abs(c[0]), y = std::abs(c[1]);
    const double hi = std::max(x, y), lo = std::min(x, y);
    if (std::hypot(x, y) <= R) return 0.0;
    if (hi - R >= lo) return hi - R;  // nearest approach on a box edge
    // corner regime: (x-t)^2 + (y-t)^2 = R^2, smaller root
    const double s = x + y;
    const double disc = s * s - 2.0 * (x * x + y * y - R * R);
    return 0.5 * (s - std::sqrt(std::max(disc, 0.0)));
}

double dist_disk_disk(const Disk& d0, const Disk& d1) {
    return linf_point_to_ball(sub(d1.center, d0.center), d0.radius + d1.radius);
}

double dist_box_box(const Box& b0, const Box& b1) {
    double worst = 0.0;
    for (size_t k = 0; k < b0.lo.size(); ++k) {
        const double gap = std::max(b0.lo[k] - (b1.lo[k] + b1.sides[k]), b1.lo[k] - (b0.lo[k] + b0.sides[k]));
        worst = std::max(worst, gap);
    }
    return std::max(worst, 0.0);
}

// Euclidean distance from a point to a box inflated by t in every axis.
double euclid_point_to_inflated_box(const Vec2& p, const Box& b, double t) {
    double acc = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double lo = b.lo[k] - t, hi = b.lo[k] + b.sides[k] + t;
        const double d = std::max({lo - p[k], p[k] - hi, 0.0});
        acc += d * d;
    }
    return std::sqrt(acc);
}

// ---- support-function separation (2d convex shapes) ----------------------
//
// Two convex sets intersect iff h_A(u) + h_B(-u) >= 0 for every direction u;
// inflating B by [-t, t]^2 adds t * ||u||_1.  The minimand is piecewise
// smooth in the direction angle, so a dense scan plus golden-section
// refinement evaluates the separation to near machine precision.

double separation_min(const Shape& a, const Shape& b, double inflate) {
    auto g = [&](double phi) {
        const Vec2 u{std::cos(phi), std::sin(phi)};
        return support_value(a, u) + support_value(b, {-u[0], -u[1]}) +
               inflate * (std::abs(u[0]) + std::abs(u[1]));
    };
    const int N = 720;  // multiple of 4: includes the box kink directions
    double best = std::numeric_limits<double>::infinity(), best_phi = 0.0;
    for (int k = 0; k < N; ++k) {
        const double phi = 2.0 * M_PI * k / N;
        const double v = g(phi);
        if (v < best) {
            best = v;
            best_phi = phi;
        }
    }
    double lo = best_phi - 2.0 * M_PI / N, hi = best_phi + 2.0 * M_PI / N;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 90; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = g(x2);
        }
    }
    return std::min({best, f1, f2});
}

bool is_disk(const Shape& s) { return std::holds_alternative<Disk>(s); }
bool is_box(const Shape& s) { return std::holds_alternative<Box>(s); }

}  // namespace

bool intersects_inflated(const Shape& s0, const Shape& s1, double t) {
    if (shape_dimension(s0) != shape_dimension(s1))
        throw std::invalid_argument("shape dimension mismatch");
    if (is_box(s0) && is_box(s1)) return dist_box_box(std::get<Box>(s0), std::get<Box>(s1)) <= t;
    if (is_disk(s0) && is_disk(s1))
        return dist_disk_disk(std::get<Disk>(s0), std::get<Disk>(s1)) <= t;
    if (is_disk(s0) && is_box(s1))
        return euclid_point_to_inflated_box(std::get<Disk>(s0).center, std::get<Box>(s1), t) <=
               std::get<Disk>(s0).radius;
    if (is_box(s0) && is_disk(s1))
        return euclid_point_to_inflated_box(std::get<Disk>(s1).center, std::get<Box>(s0), t) <=
               std::get<Disk>(s1).radius;
    const double scale = std::max({diameter(s0), diameter(s1), 1e-12});
    return separation_min(s0, s1, t) >= -1e-13 * scale;
}

double set_distance(const Shape& s0, const Shape& s1) {
    if (shape_dimension(s0) != shape_dimension(s1))
        throw std::invalid_argument("shape dimension mismatch");
    // exact closed forms
    if (is_box(s0) && is_box(s1)) return dist_box_box(std::get<Box>(s0), std::get<Box>(s1));
    if (is_disk(s0) && is_disk(s1)) return dist_disk_disk(std::get<Disk>(s0), std::get<Disk>(s1));

    if (intersects_inflated(s0, s1, 0.0)) return 0.0;
    const double scale = std::max(diameter(s0), diameter(s1));
    const double tol = 1e-9 * scale;
    const Vec2 c0 = center_point(s0), c1 = center_point(s1);
    double hi = std::max(std::abs(c0[0] - c1[0]), std::abs(c0[1] - c1[1]));
    if (hi <= 0.0) return 0.0;
    double lo = 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (intersects_inflated(s0, s1, mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double penetration_depth(const Shape& s0, const Shape& s1) {
    if (is_disk(s0) && is_disk(s1)) {
        const auto &d0 = std::get<Disk>(s0), &d1 = std::get<Disk>(s1);
        return std::max(0.0, d0.radius + d1.radius - norm2(sub(d0.center, d1.center)));
    }
    if (is_box(s0) && is_box(s1)) {
        const auto &b0 = std::get<Box>(s0), &b1 = std::get<Box>(s1);
        double depth = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < b0.lo.size(); ++k) {
            const double ov = std::min(b0.lo[k] + b0.sides[k], b1.lo[k] + b1.sides[k]) -
                              std::max(b0.lo[k], b1.lo[k]);
            if (ov <= 0.0) return 0.0;
            depth = std::min(depth, ov);
        }
        return depth;
    }
    if ((is_disk(s0) && is_box(s1)) || (is_box(s0) && is_disk(s1))) {
        const auto& d = std::get<Disk>(is_disk(s0) ? s0 : s1);
        const auto& b = std::get<Box>(is_box(s0) ? s0 : s1);
        double outside = euclid_point_to_inflated_box(d.center, b, 0.0);
        if (outside > 0.0) return std::max(0.0, d.radius - outside);
        double to_face = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 2; ++k)
            to_face = std::min({to_face, d.center[k] - b.lo[k], b.lo[k] + b.sides[k] - d.center[k]});
        return d.radius + to_face;
    }
    return std::max(0.0, separation_min(s0, s1, 0.0));
}

ValidationReport validate_packing(const Packing& p) {
    ValidationReport report;
    if (p.shapes.empty()) throw std::invalid_argument("packing must be non-empty");
    std::vector<double> diams(p.shapes.size());
    for (size_t i = 0; i < p.shapes.size(); ++i) {
        check_shape(p.shapes[i], p.dimension);
        diams[i] = diameter(p.shapes[i]);
    }
    SpatialIndex index(p, SpatialIndex::default_cell_size(p));
    index.for_each_candidate_pair([&](int i, int j) {
        const double allowed = p.overlap_tol * std::max(diams[i], diams[j]);
        const double depth = penetration_depth(p.shapes[i], p.shapes[j]);
        if (depth > allowed) report.violations.push_back({i, j, depth, allowed});
    });
    std::sort(report.violations.begin(), report.violations.end(),
              [](const OverlapViolation& a, const OverlapViolation& b) {
                  return std::tie(a.i, a.j) < std::tie(b.i, b.j);
              });
    return report;
}

RegularityReport regularity(const Packing& p) {
    if (p.shapes.empty()) throw std::invalid_argument("packing must be non-empty");
    RegularityReport out;
    out.eps_inf = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < p.shapes.size(); ++i) {
        const Shape& s = p.shapes[i];
        const double diam = diameter(s);
        out.diam_sup = std::max(out.diam_sup, diam);
        double ratio;
        if (std::holds_alternative<Disk>(s)) {
            ratio = M_PI / 4.0;
        } else if (const auto* b = std::get_if<Box>(&s)) {
            ratio = 1.0;
            for (double side : b->sides) ratio *= side / diam;
        } else {
            ratio = volume(s) / (diam * diam);
        }
        if (ratio < out.eps_inf) {
            out.eps_inf = ratio;
            out.argmin = static_cast<int>(i);
        }
    }
    return out;
}

Packing mobius_invert(const Packing& p, const Vec2& q0) {
    Packing out;
    out.dimension = p.dimension;
    out.overlap_tol = p.overlap_tol;
    out.shapes.reserve(p.shapes.size());
    for (size_t i = 0; i < p.shapes.size(); ++i) {
        const auto* d = std::get_if<Disk>(&p.shapes[i]);
        if (!d) throw std::invalid_argument("mobius_invert requires a packing of disks");
        const Vec2 rel = sub(d->center, q0);
        const double w = dot(rel, rel) - d->radius * d->radius;
        if (w <= 0.0)
            throw std::invalid_argument("inversion center lies inside or on disk " + std::to_string(i));
        out.shapes.push_back(Disk{{rel[0] / w, rel[1] / w}, d->radius / w});
    }
    return out;
}

}  // namespace packperc
