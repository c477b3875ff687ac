#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace packperc {

using Vec2 = std::array<double, 2>;

/// Closed Euclidean disk, positive radius.
struct Disk {
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
};

/// Axis-aligned box in d dimensions, given by min corner and side lengths.
struct Box {
    std::vector<double> lo;
    std::vector<double> sides;
};

/// Closed elliptical disk with semi-axes a >= b > 0 and rotation in [0, pi).
/// `angle` is the direction of the major axis measured from the x-axis.
struct Ellipse {
    Vec2 center{0.0, 0.0};
    double a = 1.0;
    double b = 1.0;
    double angle = 0.0;
};

using Shape = std::variant<Disk, Box, Ellipse>;

struct Aabb {
    std::vector<double> lo, hi;
};

int shape_dimension(const Shape& s);

/// Diameter in the ambient l-infinity metric (closed form per shape).
double diameter(const Shape& s);

/// Tight axis-aligned bounding box.
Aabb bounding_box(const Shape& s);

/// Lebesgue volume (area in 2d).
double volume(const Shape& s);

/// Dilation about the origin by `factor` > 0.
Shape scaled(const Shape& s, double factor);

/// A finite packing: shapes with (tolerated) disjoint interiors.
/// `overlap_tol` is relative: a pair may interpenetrate up to
/// overlap_tol * max(diam_i, diam_j) before it counts as a violation.
struct Packing {
    int dimension = 2;
    std::vector<Shape> shapes;
    double overlap_tol = 1e-9;
};

Packing scaled(const Packing& p, double factor);

/// True iff s0 intersects the Minkowski sum of s1 with [-t, t]^d,
/// i.e. iff the l-infinity distance between the sets is at most t.
bool intersects_inflated(const Shape& s0, const Shape& s1, double t);

/// l-infinity distance between two compact convex shapes, by bisection on the
/// inflation predicate; absolute tolerance 1e-9 after normalizing the pair by
/// the larger diameter. Exact closed forms are used for disk/disk and box/box.
double set_distance(const Shape& s0, const Shape& s1);

/// Euclidean penetration depth: 0 if interiors are disjoint, otherwise the
/// minimal translation distance separating the pair.
double penetration_depth(const Shape& s0, const Shape& s1);

struct OverlapViolation {
    int i = 0, j = 0;
    double depth = 0.0;
    double allowed = 0.0;
};

struct ValidationReport {
    std::vector<OverlapViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Reports every pair whose interiors overlap beyond the packing tolerance.
/// Candidate pairs come from a uniform-grid index, so this runs near-linearly
/// on packings whose shapes have comparable sizes.
ValidationReport validate_packing(const Packing& p);

struct RegularityReport {
    double eps_inf = 0.0;   // inf over shapes of vol(s) / diam(s)^d
    int argmin = -1;        // index of the minimizing shape
    double diam_sup = 0.0;  // sup of diameters
};

RegularityReport regularity(const Packing& p);

/// Image of a disk packing under z -> (z - q0) / |z - q0|^2.  Requires q0
/// strictly outside every disk; tangencies are preserved.  Throws
/// std::invalid_argument naming the offending disk otherwise.
Packing mobius_invert(const Packing& p, const Vec2& q0);

/// Support value of a shape in direction u (2d shapes only).
double support_value(const Shape& s, const Vec2& u);

/// A point of the shape attaining the support value (2d shapes only).
Vec2 support_point(const Shape& s, const Vec2& u);

/// Reference interior point (center / centroid).
Vec2 center_point(const Shape& s);

}  // namespace packperc
