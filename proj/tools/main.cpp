// Command-line front end: generate | pack | percolate | estimate | sweep | certify.
//
// Exit codes: 0 success (and certificate pass), 1 certificate failure or
// runtime error, 2 configuration/usage error, 3 infeasible certifier search,
// 4 generator capacity error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "packperc/certify.hpp"
#include "packperc/circlepack.hpp"
#include "packperc/generators.hpp"
#include "packperc/graph.hpp"
#include "packperc/io.hpp"
#include "packperc/percolation.hpp"

using namespace packperc;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCapacity = 4;

// Accepts plain floats plus the shorthand "e-26" for exp(-26).
double parse_prob(const std::string& text) {
    if (!text.empty() && (text[0] == 'e' || text[0] == 'E') && text.size() > 1 &&
        (text[1] == '-' || text[1] == '+')) {
        return std::exp(std::stod(text.substr(1)));
    }
    return std::stod(text);
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit_line(const json& j) {
    std::cout << j.dump() << "\n";
    std::cout.flush();  // a crashed run leaves only complete lines
}

struct FamilyOptions {
    std::string family;
    int n = 8;
    int depth = 3;
    int levels = 8;
    int aspect = 16;
    int lines = 8;
    int row_len = 8;
    int m = 4;
    int degree = 7;
    int generations = 3;
    uint64_t gen_seed = 1;

    json params() const {
        return json{{"n", n},           {"depth", depth},   {"levels", levels},
                    {"aspect", aspect}, {"lines", lines},   {"row_len", row_len},
                    {"m", m},           {"degree", degree}, {"generations", generations},
                    {"seed", gen_seed}};
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family, "packing family")->required();
        cmd->add_option("--n", n, "window size (lattice families)");
        cmd->add_option("--depth", depth, "subdivision depth (square tiling)");
        cmd->add_option("--levels", levels, "ring count (triangle prism)");
        cmd->add_option("--aspect", aspect, "ellipse aspect ratio");
        cmd->add_option("--lines", lines, "ladder row count");
        cmd->add_option("--row-len", row_len, "ladder chain length");
        cmd->add_option("--m", m, "chain disks per tangent pair");
        cmd->add_option("--degree", degree, "vertex degree (hyperbolic ball)");
        cmd->add_option("--generations", generations, "ring count (hyperbolic ball)");
        cmd->add_option("--gen-seed", gen_seed, "generator seed (random families)");
    }
};

struct EventOptions {
    std::string event = "crossing";
    std::string mode = "site";
    std::string direction = "lr";
    std::string color = "open";
    bool no_diagonal = false;
    int source = 0;
    double r = 0.0;
    int ring = -1;
    std::string targets;
    double tol = 1e-9;

    void attach(CLI::App* cmd) {
        cmd->add_option("--event", event, "crossing | reach | reach_any | reach_ring");
        cmd->add_option("--mode", mode, "site | bond");
        cmd->add_option("--direction", direction, "lr | tb (crossing)");
        cmd->add_option("--color", color, "open | closed (crossing)");
        cmd->add_flag("--no-diagonal", no_diagonal, "exclude four-corner contacts");
        cmd->add_option("--source", source, "source index (reach events)");
        cmd->add_option("--r", r, "reach distance");
        cmd->add_option("--ring", ring, "target ring (reach_ring)");
        cmd->add_option("--targets", targets, "comma-separated target indices (reach_any)");
        cmd->add_option("--tol", tol, "relative adjacency tolerance");
    }

    EventSpec build(const Generated& gen) const {
        const Mode md = mode == "bond" ? Mode::Bond : Mode::Site;
        if (mode != "site" && mode != "bond") throw CLI::ValidationError("--mode", "site or bond");
        if (event == "reach") {
            auto ev = EventSpec::reach(source, r, md);
            ev.label = "reach-r" + std::to_string(r);
            return ev;
        }
        if (event == "reach_any" || event == "reach_ring") {
            std::vector<int> tgt;
            if (event == "reach_ring") {
                if (ring < 0) throw CLI::ValidationError("--ring", "required for reach_ring");
                const auto ring_of = gen.meta.at("ring_of").get<std::vector<int>>();
                for (size_t i = 0; i < ring_of.size(); ++i)
                    if (ring_of[i] == ring) tgt.push_back(static_cast<int>(i));
                if (tgt.empty()) throw CLI::ValidationError("--ring", "no vertices in that ring");
            } else {
                std::stringstream ss(targets);
                std::string tok;
                while (std::getline(ss, tok, ',')) tgt.push_back(std::stoi(tok));
                if (tgt.empty()) throw CLI::ValidationError("--targets", "none given");
            }
            auto ev = EventSpec::reach_any(source, std::move(tgt), md);
            ev.label = event;
            return ev;
        }
        if (event != "crossing") throw CLI::ValidationError("--event", "unknown event " + event);

        Rect window;
        if (gen.meta.contains("window")) {
            window.lo = {gen.meta["window"]["lo"][0].get<double>(),
                         gen.meta["window"]["lo"][1].get<double>()};
            window.hi = {gen.meta["window"]["hi"][0].get<double>(),
                         gen.meta["window"]["hi"][1].get<double>()};
        } else if (gen.has_geometry()) {
            window.lo = {1e300, 1e300};
            window.hi = {-1e300, -1e300};
            for (const auto& s : gen.packing.shapes) {
                const Aabb bb = bounding_box(s);
                for (int k = 0; k < 2; ++k) {
                    window.lo[k] = std::min(window.lo[k], bb.lo[k]);
                    window.hi[k] = std::max(window.hi[k], bb.hi[k]);
                }
            }
        }
        const CrossDirection dir =
            direction == "tb" ? CrossDirection::TopBottom : CrossDirection::LeftRight;
        auto ev = EventSpec::crossing(window, dir, color == "closed" ? Color::Closed : Color::Open,
                                      !no_diagonal, md);
        ev.side_tol = tol;
        if (gen.meta.contains("sides")) {
            const char* a = dir == CrossDirection::LeftRight ? "left" : "bottom";
            const char* b = dir == CrossDirection::LeftRight ? "right" : "top";
            ev.side_sets = {gen.meta["sides"][a].get<std::vector<int>>(),
                            gen.meta["sides"][b].get<std::vector<int>>()};
        }
        ev.label = "crossing-" + direction + "-" + color + "-" + mode;
        return ev;
    }
};

json estimate_to_json(const Estimate& est) {
    return json{{"event", est.event}, {"p", est.p},       {"trials", est.trials},
                {"hits", est.hits},   {"phat", est.phat}, {"ci_lo", est.ci_lo},
                {"ci_hi", est.ci_hi}, {"seed", est.seed}};
}

std::string estimate_to_csv(const Estimate& est) {
    std::ostringstream out;
    out << est.event << "," << json(est.p).dump() << "," << est.trials << "," << est.hits << ","
        << json(est.phat).dump() << "," << json(est.ci_lo).dump() << "," << json(est.ci_hi).dump()
        << "," << est.seed;
    return out.str();
}

Triangulation triangulation_from_json(const json& j) {
    Triangulation t;
    t.map.rot = j.at("rotations").get<std::vector<std::vector<int>>>();
    t.set_boundary(j.at("boundary").get<std::vector<int>>());
    t.check();
    return t;
}

// Flat key=value configuration: values fill in flags that were not given on
// the command line, so explicit flags always win.  Unknown keys surface as
// unknown options and fail the parse.
std::vector<std::string> splice_config(const std::vector<std::string>& raw) {
    std::string config_path;
    std::vector<std::string> args;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config") {
            if (i + 1 >= raw.size()) throw std::invalid_argument("--config needs a file");
            config_path = raw[++i];
        } else if (raw[i].rfind("--config=", 0) == 0) {
            config_path = raw[i].substr(9);
        } else {
            args.push_back(raw[i]);
        }
    }
    if (config_path.empty()) return args;
    if (args.empty()) throw std::invalid_argument("--config requires a subcommand");

    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config file " + config_path);
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key=value: " + line);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("empty key in config");
        const std::string flag = "--" + key;
        bool overridden = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) overridden = true;
        if (overridden) continue;
        extra.push_back(flag);
        if (value == "true") continue;  // bare flag
        extra.push_back(value);
    }
    // insert after the subcommand name
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    return args;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo, hi, step;
        char c1, c2;
        std::istringstream ss(text);
        if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':')
            throw std::runtime_error("bad grid: " + text);
        for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
    } else {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(parse_prob(tok));
    }
    if (out.empty()) throw std::runtime_error("empty grid");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"percolation on geometric packings: generators, tangency graphs, "
                 "Monte Carlo estimates and certified proof constants"};
    app.require_subcommand(1);

    // ---- generate ----
    auto* cmd_gen = app.add_subcommand("generate", "emit a packing family as JSON");
    FamilyOptions gen_fam;
    gen_fam.attach(cmd_gen);

    // ---- pack ----
    auto* cmd_pack = app.add_subcommand("pack", "circle-pack a triangulation");
    std::string pack_input = "-";
    double pack_boundary_radius = 1.0;
    double pack_tol = 1e-10;
    std::string pack_svg;
    cmd_pack->add_option("--input", pack_input, "triangulation JSON file, or - for stdin");
    cmd_pack->add_option("--boundary-radius", pack_boundary_radius, "uniform boundary radius");
    cmd_pack->add_option("--tol", pack_tol, "angle-sum residual tolerance");
    cmd_pack->add_option("--svg", pack_svg, "write an SVG rendering here");

    // ---- percolate ----
    auto* cmd_perc = app.add_subcommand("percolate", "draw one percolation sample");
    FamilyOptions perc_fam;
    perc_fam.attach(cmd_perc);
    double perc_p = 0.5;
    uint64_t perc_seed = 0, perc_trial = 0;
    std::string perc_mode = "site";
    double perc_tol = 1e-9;
    cmd_perc->add_option("--p", perc_p, "retention probability");
    cmd_perc->add_option("--seed", perc_seed, "master seed")->required();
    cmd_perc->add_option("--trial", perc_trial, "trial index");
    cmd_perc->add_option("--mode", perc_mode, "site | bond");
    cmd_perc->add_option("--tol", perc_tol, "relative adjacency tolerance");

    // ---- estimate ----
    auto* cmd_est = app.add_subcommand("estimate", "Monte Carlo event probability");
    FamilyOptions est_fam;
    est_fam.attach(cmd_est);
    EventOptions est_ev;
    est_ev.attach(cmd_est);
    std::string est_p = "0.5";
    uint64_t est_trials = 10000, est_seed = 0;
    int est_workers = 0;
    std::string est_format = "json";
    cmd_est->add_option("--p", est_p, "retention probability (accepts e-K)");
    cmd_est->add_option("--trials", est_trials, "number of trials");
    cmd_est->add_option("--seed", est_seed, "master seed")->required();
    cmd_est->add_option("--workers", est_workers, "worker threads (default PACKPERC_THREADS)");
    cmd_est->add_option("--format", est_format, "json | csv");

    // ---- sweep ----
    auto* cmd_sweep = app.add_subcommand("sweep", "estimate over a grid of p values");
    FamilyOptions sweep_fam;
    sweep_fam.attach(cmd_sweep);
    EventOptions sweep_ev;
    sweep_ev.attach(cmd_sweep);
    std::string sweep_grid = "0.1:0.9:0.1";
    uint64_t sweep_trials = 10000, sweep_seed = 0;
    int sweep_workers = 0;
    std::string sweep_format = "json";
    cmd_sweep->add_option("--p-grid", sweep_grid, "lo:hi:step or comma list");
    cmd_sweep->add_option("--trials", sweep_trials, "trials per grid point");
    cmd_sweep->add_option("--seed", sweep_seed, "master seed")->required();
    cmd_sweep->add_option("--workers", sweep_workers, "worker threads");
    cmd_sweep->add_option("--format", sweep_format, "json | csv");

    // ---- certify ----
    auto* cmd_cert = app.add_subcommand("certify", "evaluate the proof-constant certificates");
    std::string cert_p;
    int cert_d = 0;
    double cert_eps = 0.0, cert_c = 1.0;
    bool cert_max_p = false;
    cmd_cert->add_option("--p", cert_p, "retention probability (accepts e-K)");
    cmd_cert->add_option("--d", cert_d, "dimension (general certificate)");
    cmd_cert->add_option("--epsilon", cert_eps, "regularity constant (general certificate)");
    cmd_cert->add_option("--C", cert_c, "decay-exponent scale (general certificate)");
    cmd_cert->add_flag("--max-p", cert_max_p, "report the largest certified p");

    std::vector<std::string> args;
    try {
        args = splice_config(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    // CLI11 consumes the argument vector back to front
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*cmd_gen) {
            const Generated gen = generate_family(gen_fam.family, gen_fam.params());
            if (!gen.has_geometry()) {
                std::cerr << "family instance exceeds the floating-point geometry range; "
                             "only the adjacency graph is defined\n";
                return kExitCapacity;
            }
            emit_line(packing_to_json(gen.packing));
            return 0;
        }

        if (*cmd_pack) {
            const Triangulation tri = triangulation_from_json(json::parse(read_input(pack_input)));
            const auto radii = compute_radii(
                tri, std::vector<double>(tri.boundary.size(), pack_boundary_radius), pack_tol);
            const LayoutPacking lay = layout(tri, radii);
            if (!pack_svg.empty()) {
                std::ofstream svg(pack_svg);
                svg << layout_to_svg(lay);
            }
            json out = packing_to_json(lay.to_packing());
            out["max_residual"] = lay.max_residual;
            emit_line(out);
            return 0;
        }

        if (*cmd_perc) {
            const Generated gen = generate_family(perc_fam.family, perc_fam.params());
            const AdjacencyGraph g = gen.graph ? *gen.graph : build_graph(gen.packing, perc_tol);
            json out{{"family", perc_fam.family},
                     {"p", perc_p},
                     {"seed", perc_seed},
                     {"trial", perc_trial},
                     {"mode", perc_mode}};
            if (perc_mode == "bond") {
                const auto sample = sample_bonds(g, perc_p, perc_seed, perc_trial);
                json edges = json::array();
                for (int e = 0; e < g.edge_count(); ++e)
                    if (sample.open[e]) edges.push_back({g.edges[e].first, g.edges[e].second});
                out["open_edges"] = std::move(edges);
            } else {
                const auto sample = sample_sites(g, perc_p, perc_seed, perc_trial);
                json open = json::array();
                for (int v = 0; v < g.n; ++v)
                    if (sample.open[v]) open.push_back(v);
                out["open"] = std::move(open);
            }
            emit_line(out);
            return 0;
        }

        if (*cmd_est || *cmd_sweep) {
            const bool is_sweep = static_cast<bool>(*cmd_sweep);
            FamilyOptions& fam = is_sweep ? sweep_fam : est_fam;
            EventOptions& evo = is_sweep ? sweep_ev : est_ev;
            const Generated gen = generate_family(fam.family, fam.params());
            const AdjacencyGraph g = gen.graph ? *gen.graph : build_graph(gen.packing, evo.tol);
            const EventSpec ev = evo.build(gen);
            const std::string format = is_sweep ? sweep_format : est_format;
            const uint64_t trials = is_sweep ? sweep_trials : est_trials;
            const uint64_t seed = is_sweep ? sweep_seed : est_seed;
            const int workers = is_sweep ? sweep_workers : est_workers;
            const std::vector<double> grid =
                is_sweep ? parse_grid(sweep_grid) : std::vector<double>{parse_prob(est_p)};
            if (format == "csv") {
                std::cout << "event,p,trials,hits,phat,ci_lo,ci_hi,seed\n";
                std::cout.flush();
            }
            for (double p : grid) {
                const Estimate est = monte_carlo(ev, gen.packing, g, p, trials, seed, workers);
                if (format == "csv") {
                    std::cout << estimate_to_csv(est) << "\n";
                    std::cout.flush();
                } else {
                    emit_line(estimate_to_json(est));
                }
            }
            return 0;
        }

        if (*cmd_cert) {
            if (cert_max_p) {
                const double p_star = max_certified_p();
                emit_line(json{{"max_certified_p", p_star}});
                return 0;
            }
            if (cert_d > 0) {
                if (!(cert_eps > 0.0)) {
                    std::cerr << "--epsilon required with --d\n";
                    return kExitUsage;
                }
                const auto gc = certify_general_theorem(cert_d, cert_eps, cert_c);
                if (!gc.feasible) {
                    std::cerr << "no feasible shell cutoff m0 <= 1000 for d=" << cert_d
                              << " eps=" << cert_eps << "\n";
                    return kExitInfeasible;
                }
                emit_line(general_certificate_to_json(gc));
                return gc.cert.overall ? 0 : 1;
            }
            if (cert_p.empty()) {
                std::cerr << "certify needs --p, --d/--epsilon, or --max-p\n";
                return kExitUsage;
            }
            const auto cert = certify_square_theorem(parse_prob(cert_p));
            emit_line(certificate_to_json(cert));
            return cert.overall ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        std::cerr << what << "\n";
        if (what.find("capacity exceeded") != std::string::npos) return kExitCapacity;
        return 1;
    }
    return 0;
}
