#include "packperc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace packperc {

namespace {
constexpr double kSlack = 1e-12;  // added to every lhs before comparison

CertEntry make_entry(std::string name, std::string formula, double lhs, double rhs,
                     std::string note = {}) {
    CertEntry e;
    e.name = std::move(name);
    e.formula = std::move(formula);
    e.lhs = lhs;
    e.rhs = rhs;
    e.margin = rhs - lhs;
    e.pass = std::isfinite(lhs) && (lhs + kSlack <= rhs);
    e.note = std::move(note);
    return e;
}
}  // namespace

double tail_sum_linear(double x, int m0) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("tail_sum_linear requires x in (0,1)");
    if (m0 < 1) throw std::invalid_argument("tail_sum_linear requires m0 >= 1");
    const double num = static_cast<double>(m0) - static_cast<double>(m0 - 1) * x;
    return std::pow(x, m0) * num / ((1.0 - x) * (1.0 - x));
}

PolyTail tail_sum_poly(double x, int m0, int d, double a, double b) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("tail_sum_poly requires x in (0,1)");
    if (m0 < 1 || d < 1 || a < 0.0 || b < 0.0)
        throw std::invalid_argument("tail_sum_poly requires m0,d >= 1 and a,b >= 0");
    PolyTail out;
    double m = static_cast<double>(m0);
    double term = std::pow(a * m + b, d) * std::pow(x, m);
    for (int iter = 0; iter < 100000; ++iter) {
        out.value += term;
        const double next = std::pow(a * (m + 1.0) + b, d) * std::pow(x, m + 1.0);
        // ratio of consecutive terms is decreasing, so the rest is dominated
        // by a geometric series with the current ratio
        const double q = (term > 0.0) ? next / term : 0.0;
        if (q < 1.0) {
            const double rem = next / (1.0 - q);
            if (rem <= 1e-14 * std::max(out.value, 1e-300) || next == 0.0) {
                out.remainder_bound = rem;
                return out;
            }
        }
        term = next;
        m += 1.0;
    }
    throw std::runtime_error("tail_sum_poly failed to converge");
}

Certificate certify_square_theorem(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    Certificate c;
    c.p = p;

    const double e2 = std::exp(2.0);
    c.entries.push_back(make_entry(
        "base_case_degree8", "max(8*p*exp(2), 8*p^2) <= 1",
        std::max(8.0 * p * e2, 8.0 * p * p), 1.0,
        "unit squares touch at most 8 others; path counting closes the k=0 case"));

    c.entries.push_back(make_entry("small_r", "p <= exp(-2)", p, std::exp(-2.0),
                                   "events need the source open"));

    const double closure = 4.0 * std::exp(-2.0) + 544.0 * p * std::exp(18.0) +
                           80.0 * std::exp(4.0) * tail_sum_linear(std::exp(-2.0), 8);
    c.entries.push_back(make_entry(
        "induction_closure",
        "4*exp(-2) + 544*p*exp(18) + 80*exp(4)*sum_{m>=8} m*exp(-2m) <= 1", closure, 1.0,
        "shell counts 136 and 20m"));

    const double infinity = 361.0 * p + 24.0 * tail_sum_linear(std::exp(-1.0), 8);
    c.entries.push_back(make_entry("infinity_step",
                                   "361*p + 24*sum_{m>=8} m*exp(-m) < 1", infinity, 1.0,
                                   "near count 19^2 and annulus count 24m"));

    c.overall = std::all_of(c.entries.begin(), c.entries.end(),
                            [](const CertEntry& e) { return e.pass; });
    return c;
}

double max_certified_p() {
    double lo = std::exp(-26.0);
    if (!certify_square_theorem(lo).overall)
        throw std::runtime_error("reference p unexpectedly fails certification");
    double hi = 0.5;
    if (certify_square_theorem(hi).overall) return hi;
    while ((hi - lo) / lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (certify_square_theorem(mid).overall)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace {

struct GeneralTerms {
    double base_lhs;      // max(p-scaled degree term, p * e^{Cd}) normalized to <= 1
    double closure_free;  // p-independent part of the closure inequality
    double closure_coeff; // coefficient of p in the closure inequality
    double inf_free;      // p-independent part of the infinity-step inequality
    double inf_coeff;     // coefficient of p in the infinity-step inequality
};

GeneralTerms general_terms(int d, double eps, int m0, double C) {
    GeneralTerms t{};
    const double dd = static_cast<double>(d);
    const PolyTail closure_tail = tail_sum_poly(std::exp(-2.0 * C), m0, d, 4.0, 12.0);
    t.closure_free = std::pow(2.0, dd) * std::exp(-C * dd) +
                     (std::exp(4.0 * C) / eps) * (closure_tail.value + closure_tail.remainder_bound);
    t.closure_coeff = (1.0 / eps) * std::pow(4.0 * m0 + 8.0, dd) * std::exp(C * (2.0 * m0 + 2.0));
    const PolyTail inf_tail = tail_sum_poly(std::exp(-C), m0, d, 2.0, 6.0);
    t.inf_free = (inf_tail.value + inf_tail.remainder_bound) / eps;
    t.inf_coeff = (1.0 / eps) * std::pow(2.0 * m0 + 4.0, dd);
    t.base_lhs = 0.0;
    return t;
}

Certificate certify_general_at(int d, double eps, int m0, double p, double C) {
    Certificate c;
    c.p = p;
    c.d = d;
    c.epsilon = eps;
    c.m0 = m0;
    const double dd = static_cast<double>(d);
    const GeneralTerms t = general_terms(d, eps, m0, C);

    const double degree_term = p * std::pow(3.0, dd) / eps * std::exp(2.0 * (C - 1.0));
    const double open_term = p * std::exp(C * dd);
    c.entries.push_back(make_entry("base_case_degree",
                                   "max(p*3^d/eps*exp(2(C-1)), p*exp(C*d)) < 1",
                                   std::max(degree_term, open_term), 1.0,
                                   "a unit-diameter set meets at most 3^d/eps others"));

    c.entries.push_back(make_entry(
        "induction_closure",
        "2^d*exp(-C*d) + (4*m0+8)^d*exp(C*(2*m0+2))*p/eps + exp(4C)/eps*sum_{m>=m0}(4m+12)^d*exp(-2Cm) < 1",
        t.closure_free + t.closure_coeff * p, 1.0, "shell counts (2m0+4)^d/eps and (2m+6)^d/eps"));

    c.entries.push_back(make_entry(
        "infinity_step",
        "(2*m0+4)^d*p/eps + (1/eps)*sum_{m>=m0}(2m+6)^d*exp(-Cm) < 1",
        t.inf_free + t.inf_coeff * p, 1.0,
        "reconstructed infinity-step counts, mirroring the square case"));

    c.overall = std::all_of(c.entries.begin(), c.entries.end(),
                            [](const CertEntry& e) { return e.pass; });
    return c;
}

}  // namespace

GeneralCertificate certify_general_theorem(int d, double eps, double C) {
    if (d < 2) throw std::invalid_argument("dimension must be at least 2");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon must lie in (0,1]");
    if (!(C >= 1.0)) throw std::invalid_argument("C must be >= 1");

    GeneralCertificate out;
    out.feasible = false;
    int m0 = -1;
    for (int cand = 1; cand <= 1000; ++cand) {
        const GeneralTerms t = general_terms(d, eps, cand, C);
        if (t.closure_free < 1.0 - 1e-9 && t.inf_free < 1.0 - 1e-9) {
            m0 = cand;
            break;
        }
    }
    if (m0 < 0) return out;  // no feasible shell cutoff within bounds

    double lo = 0.0, hi = 1.0;
    // shrink hi to a certified point first
    while (hi > 1e-320 && !certify_general_at(d, eps, m0, hi, C).overall) hi *= 0.5;
    if (hi <= 1e-320) return out;
    lo = hi;
    double bad = std::min(1.0, hi * 2.0);
    while (bad - lo > 1e-4 * lo) {
        const double mid = 0.5 * (lo + bad);
        if (certify_general_at(d, eps, m0, mid, C).overall)
            lo = mid;
        else
            bad = mid;
    }
    out.feasible = true;
    out.m0 = m0;
    out.p = lo;
    out.cert = certify_general_at(d, eps, m0, lo, C);
    return out;
}

double AlphaTable::at(int k, double r) const {
    if (r <= 0.0) return 1.0;
    if (k < 0 || k > k_max) return 1.0;
    const auto& row = rows[k];
    size_t idx = static_cast<size_t>(std::floor(r / step));
    if (idx >= row.size()) idx = row.size() - 1;
    return row[idx];
}

AlphaTable refine_alpha_table(double p, int k_max, double r_max, double step) {
    if (!certify_square_theorem(p).overall)
        throw std::invalid_argument("refine_alpha_table requires a certified p");
    if (k_max < 0 || !(step > 0.0) || !(r_max >= step))
        throw std::invalid_argument("bad alpha table grid");

    AlphaTable t;
    t.p = p;
    t.step = step;
    t.r_max = r_max;
    t.k_max = k_max;
    const size_t J = static_cast<size_t>(std::floor(r_max / step)) + 1;

    t.rows.assign(k_max + 1, std::vector<double>(J));
    for (int k = 0; k <= k_max; ++k) {
        const double inv = std::pow(2.0, 1.0 - k);  // 1 / 2^{k-1}
        for (size_t j = 0; j < J; ++j) {
            const double r = step * static_cast<double>(j);
            double v = (j == 0) ? p : std::min(p, std::exp(-r * inv));
            if (k == 0 && j > 0) {
                const double path = p * std::pow(8.0 * p, std::ceil(r) + 1.0);
                v = std::min(v, path);
            }
            t.rows[k][j] = v;
        }
    }

    // Sharpen rows k >= 1 by iterating the shell recursion until fixed point.
    for (int sweep = 0; sweep < 1000; ++sweep) {
        double change = 0.0;
        for (int k = 1; k <= k_max; ++k) {
            const double scale = std::pow(2.0, k);       // 2^k
            const double half = std::pow(2.0, k - 1);    // 2^{k-1}
            for (size_t j = 1; j < J; ++j) {
                const double r = step * static_cast<double>(j);
                if (r <= scale) continue;  // already capped at p
                double bound = t.at(k - 1, r) + 136.0 * p * t.at(k, r - 9.0 * scale);
                const int m_hi = static_cast<int>(std::floor(r / scale));
                for (int m = 8; m <= m_hi; ++m) {
                    const double f1 = std::min(p, t.at(k - 1, m * scale - half));
                    const double f2 = t.at(k, r - (m + 2.0) * scale);
                    bound += 20.0 * m * f1 * f2;
                }
                // shells beyond m_hi: second factor is 1, first decays as the
                // closed-form seed e^{-4m+2}
                const int m_tail = std::max(8, m_hi + 1);
                bound += 20.0 * std::exp(2.0) * tail_sum_linear(std::exp(-4.0), m_tail);
                const double cand = 4.0 * bound;
                if (cand < t.rows[k][j]) {
                    change = std::max(change, t.rows[k][j] - cand);
                    t.rows[k][j] = cand;
                }
            }
        }
        if (change < 1e-12) break;
    }

    // enforce monotone non-increase in r (valid: true alpha is non-increasing)
    for (int k = 0; k <= k_max; ++k)
        for (size_t j = 1; j < J; ++j)
            t.rows[k][j] = std::min(t.rows[k][j], t.rows[k][j - 1]);
    return t;
}

nlohmann::json certificate_to_json(const Certificate& c) {
    nlohmann::json j;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : c.entries) {
        j["entries"].push_back({{"name", e.name},
                                {"formula", e.formula},
                                {"lhs", e.lhs},
                                {"rhs", e.rhs},
                                {"margin", e.margin},
                                {"pass", e.pass},
                                {"note", e.note}});
    }
    j["overall"] = c.overall;
    j["p"] = c.p;
    if (c.d > 0) {
        j["d"] = c.d;
        j["epsilon"] = c.epsilon;
        j["m0"] = c.m0;
    }
    return j;
}

nlohmann::json general_certificate_to_json(const GeneralCertificate& g) {
    nlohmann::json j = certificate_to_json(g.cert);
    j["feasible"] = g.feasible;
    j["m0"] = g.m0;
    j["p"] = g.p;
    return j;
}

}  // namespace packperc
