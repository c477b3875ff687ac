#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace packperc {

/// Sum_{m >= m0} m x^m in closed form: x^m0 (m0 - (m0-1) x) / (1-x)^2.
double tail_sum_linear(double x, int m0);

struct PolyTail {
    double value = 0.0;            // partial sum plus nothing beyond the cutoff
    double remainder_bound = 0.0;  // rigorous geometric-domination bound on the rest
};

/// Sum_{m >= m0} (a m + b)^d x^m, summed until a geometric bound on the
/// remainder drops below 1e-14 of the value.
PolyTail tail_sum_poly(double x, int m0, int d, double a, double b);

struct CertEntry {
    std::string name;
    std::string formula;  // the inequality, re-derivable from p (and d, eps, m0)
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    bool pass = false;
    std::string note;
};

struct Certificate {
    std::vector<CertEntry> entries;
    bool overall = false;
    double p = 0.0;
    int d = 0;          // 0 when not applicable
    double epsilon = 0.0;
    int m0 = 0;
};

/// Inequalities behind the square-packing bound, evaluated at retention
/// probability p.  Overall pass at p = e^-26.  Comparisons carry an explicit
/// 1e-12 slack on the left-hand side.
Certificate certify_square_theorem(double p);

/// Largest p passing certify_square_theorem, by bisection to 1e-3 relative.
/// Deterministic; the returned value itself certifies.
double max_certified_p();

struct GeneralCertificate {
    bool feasible = false;
    int m0 = 0;
    double p = 0.0;
    Certificate cert;
};

/// d-dimensional epsilon-regular analogue: picks the smallest m0 <= 1000
/// making the p-independent terms sum below 1, then the largest p by
/// bisection.  C scales the target decay exponent (C = 1 is the plain bound).
GeneralCertificate certify_general_theorem(int d, double eps, double C = 1.0);

/// Certified upper bounds on the reach-probability envelope alpha(k, r) for
/// square packings with diameters in [1, 2^k]: the closed-form seed
/// min(p, e^{-r 2^{1-k}}) is sharpened by iterating the shell recursion to a
/// fixed point.
struct AlphaTable {
    double p = 0.0;
    double step = 1.0;
    double r_max = 0.0;
    int k_max = 0;
    std::vector<std::vector<double>> rows;  // rows[k][j] bounds alpha(k, j*step)

    // Upper-bound lookup for arbitrary r (1 for r <= 0).
    double at(int k, double r) const;
};

AlphaTable refine_alpha_table(double p, int k_max, double r_max, double step);

nlohmann::json certificate_to_json(const Certificate& c);
nlohmann::json general_certificate_to_json(const GeneralCertificate& g);

}  // namespace packperc
