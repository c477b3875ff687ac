#pragma once

#include <map>
#include <string>
#include <vector>

#include "packperc/geometry.hpp"
#include "packperc/triangulation.hpp"

namespace packperc {

struct RadiiAssignment {
    std::vector<double> radii;
    double residual = 0.0;  // max over interior vertices of |theta(v) - 2pi|
    int sweeps = 0;
};

/// Corner angle at the vertex of radius rv in a tangent triple (rv, ru, rw).
double corner_angle(double rv, double ru, double rw);

/// Interior angle sum at v for the given radii.
double angle_sum(const Triangulation& t, const std::vector<double>& radii, int v);

/// Radii of the packing realizing t with the given boundary radii (aligned
/// with t.boundary): synchronous sweeps of per-vertex monotone solves of
/// theta(v) = 2pi, with geometric extrapolation between sweeps.  Throws if the
/// residual does not reach tol within the sweep cap.
RadiiAssignment compute_radii(const Triangulation& t, const std::vector<double>& boundary_radii,
                              double tol = 1e-10, int max_sweeps = 100000);

struct LayoutPacking {
    std::vector<Vec2> centers;
    std::vector<double> radii;
    double max_residual = 0.0;  // max relative tangency error over edges
    int worst_u = -1, worst_v = -1;

    Packing to_packing(double overlap_tol = 1e-9) const;
};

/// Realizes the packing: root at the origin, first neighbor on the positive
/// x-axis, remaining centers chained breadth-first through face corners.
/// Layout error is reported, not redistributed; residuals above fail_tol
/// abort with the worst edge named.
LayoutPacking layout(const Triangulation& t, const RadiiAssignment& radii,
                     double fail_tol = 1e-3);

/// Minimum neighbor/center radius ratio per interior-vertex degree.
std::map<int, double> ring_audit(const Triangulation& t, const std::vector<double>& radii);

std::string layout_to_svg(const LayoutPacking& l);

}  // namespace packperc
