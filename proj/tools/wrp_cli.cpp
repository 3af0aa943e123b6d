// Command line front end: instance generation, solving, preprocessing,
// verification, SVG plotting and benchmark tables.
#include "CLI11.hpp"
#include "json.hpp"

#include "wrp/preprocess.hpp"
#include "wrp/verify.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace wrp;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IOError", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IOError", "cannot write " + path);
    out << text;
}

Vec pt2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

// seeded Voronoi recipe: uniform seeds in the box, norms drawn from the
// five-norm menu, all weights 1
InstanceFile generate_instance(const std::string& kind, int m, int n, unsigned seed,
                               const Vec& lo, const Vec& hi) {
    if (m < 2) throw Error("BadArguments", "need m >= 2 regions");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(lo[0], hi[0]), uy(lo[1], hi[1]);
    std::vector<Vec> seeds;
    for (int i = 0; i < m; ++i) seeds.push_back(pt2(ux(rng), uy(rng)));
    Subdivision sub = voronoi_subdivision(seeds, lo, hi);
    const char* menu[5] = {"1", "3/2", "2", "3", "inf"};
    std::uniform_int_distribution<int> pick(0, 4);
    for (auto& r : sub.regions) r.p = PNorm::parse(menu[pick(rng)]);

    InstanceFile f;
    f.sub = std::move(sub);
    if (kind == "spp") {
        f.has_terminals = true;
        f.source = lo;
        f.target = hi;
    } else {
        for (int l = 0; l < n; ++l) f.demands.push_back({pt2(ux(rng), uy(rng)), 1.0});
    }
    return f;
}

std::vector<FaceSpec> parse_face_specs(const std::string& text, std::size_t n_edges) {
    json j = json::parse(text);
    std::vector<FaceSpec> specs;
    for (const auto& jf : j.at("faces"))
        specs.push_back({PNorm::parse(jf.at("p").get<std::string>()),
                         jf.value("weight", 1.0)});
    if (specs.size() != n_edges)
        throw Error("MissingFaceNorm", "face spec count does not match the edge count");
    return specs;
}

int parse_preprocess(const std::string& s, int m) {
    if (s == "off") return 0;
    if (s == "all") return m;
    return std::min(std::max(std::stoi(s), 0), m);
}

struct SolveOutcome {
    SolveReport report;
    SolutionFile file;       // 1-based indices, ready to serialize
    bool verified = false;
    double max_snell = 0.0, max_improvement = 0.0;
    std::vector<int> eliminated;  // 0-based
};

SolveOutcome run_spp(const SppInstance& in, bool use_f2, const SolveConfig& cfg,
                     int m_star, double tol) {
    SolveOutcome out;
    PathSolution sol;
    if (in.s == in.t || m_star == 0) {
        SppResult r = solve_spp(in, use_f2, cfg);
        out.report = r.report;
        sol = r.sol;
    } else {
        EliminationList el = preprocess_spp(in, m_star);
        out.eliminated = el.eliminated;
        BuiltModel bm = use_f2 ? build_spp_f2(in) : build_spp_f1(in);
        apply_eliminations(bm.model, bm.atlas, in.arcs, el.eliminated);
        auto [rep, x] = solve_misocp(bm.model, cfg, el.upper_bound);
        out.report = rep;
        if (x.size() > 0) {
            sol = decode_spp(in, bm.atlas, x, rep.ub);
        } else {
            // the heuristic incumbent pruned everything; reconstruct it
            SegmentPath sp = segment_induced_path(in.sub, in.source, in.target);
            FixedPathResult fp = fixed_path_eval(in, sp.regions);
            sol = {fp.value, sp.regions, fp.gates};
        }
    }
    polish_gates(in, sol);
    VerifyReport vr = verify_path_optimality(in, sol, tol);
    out.verified = vr.passed;
    out.max_snell = vr.max_snell;
    out.max_improvement = vr.max_improvement;

    out.file.value = sol.value;
    out.file.lb = out.report.lb;
    out.file.gap_pct = out.report.gap_pct;
    for (int r : sol.path) out.file.path.push_back(r + 1);
    out.file.gates = sol.gates;
    return out;
}

SolveOutcome run_locp(const WeberInstance& in, bool use_f2, const SolveConfig& cfg,
                      int m_star, double tol) {
    SolveOutcome out;
    WeberSolution sol;
    if (m_star == 0) {
        LocpResult r = solve_locp(in, use_f2, cfg);
        out.report = r.report;
        sol = r.sol;
    } else {
        EliminationList el = preprocess_locp(in, m_star);
        out.eliminated = el.eliminated;
        BuiltModel bm = use_f2 ? build_locp_f2(in) : build_locp_f1(in);
        apply_eliminations(bm.model, bm.atlas, in.arcs, el.eliminated);
        auto [rep, x] = solve_misocp(bm.model, cfg, el.upper_bound);
        out.report = rep;
        if (x.size() > 0)
            sol = decode_locp(in, bm.atlas, x, rep.ub);
        else
            weber_route_bound(in, euclidean_weber_point(in), &sol);
    }
    double total = 0.0;
    for (std::size_t l = 0; l < in.demands.size(); ++l)
        total += in.demands[l].weight * sol.routes[l].value;
    out.verified = std::abs(total - sol.value) <= tol * std::max(1.0, std::abs(sol.value)) &&
                   contains(in.sub.regions[sol.facility_region].polytope, sol.facility, 1e-6);
    out.max_improvement = std::abs(total - sol.value);

    out.file.value = sol.value;
    out.file.lb = out.report.lb;
    out.file.gap_pct = out.report.gap_pct;
    out.file.has_facility = true;
    out.file.facility = sol.facility;
    out.file.path.push_back(sol.facility_region + 1);
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string plot_svg(const InstanceFile& f, const SolutionFile* sol) {
    if (f.sub.dim != 2) throw Error("DimensionUnsupported", "plotting is 2-D only");
    const Vec lo = f.sub.box_lo, hi = f.sub.box_hi;
    const double W = 800.0, margin = 30.0;
    const double scale = (W - 2 * margin) / std::max(hi[0] - lo[0], 1e-9);
    const double H = (hi[1] - lo[1]) * scale + 2 * margin;
    auto X = [&](double x) { return margin + (x - lo[0]) * scale; };
    auto Y = [&](double y) { return H - margin - (y - lo[1]) * scale; };

    const char* palette[8] = {"#cfe8f3", "#f3d9cf", "#d9f3cf", "#f3eecf",
                              "#e3cff3", "#cff3ea", "#f3cfe3", "#dedede"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(W) << " "
      << fmt(H) << "\">\n";
    for (int i = 0; i < f.sub.size(); ++i) {
        const Region& r = f.sub.regions[i];
        s << "<polygon points=\"";
        for (const auto& v : r.polytope.vertices)
            s << fmt(X(v[0])) << "," << fmt(Y(v[1])) << " ";
        s << "\" fill=\"" << palette[i % 8] << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
        Vec c = centroid(r.polytope);
        s << "<text x=\"" << fmt(X(c[0])) << "\" y=\"" << fmt(Y(c[1]))
          << "\" font-size=\"12\" text-anchor=\"middle\">P" << i + 1 << " (p=" << r.p.str()
          << ", w=" << fmt(r.weight) << ")</text>\n";
    }
    auto dot = [&](const Vec& v, const char* color, double r) {
        s << "<circle cx=\"" << fmt(X(v[0])) << "\" cy=\"" << fmt(Y(v[1])) << "\" r=\""
          << fmt(r) << "\" fill=\"" << color << "\"/>\n";
    };
    if (sol && !sol->gates.empty() && f.has_terminals) {
        s << "<polyline points=\"" << fmt(X(f.source[0])) << "," << fmt(Y(f.source[1]))
          << " ";
        for (const auto& g : sol->gates) s << fmt(X(g[0])) << "," << fmt(Y(g[1])) << " ";
        s << fmt(X(f.target[0])) << "," << fmt(Y(f.target[1]))
          << "\" fill=\"none\" stroke=\"#c22\" stroke-width=\"2\"/>\n";
        for (const auto& g : sol->gates) dot(g, "#c22", 3.0);
    }
    if (f.has_terminals) {
        dot(f.source, "#000", 4.0);
        dot(f.target, "#000", 4.0);
    }
    for (const auto& d : f.demands) dot(d.point, "#000", 3.5);
    if (sol && sol->has_facility) {
        s << "<rect x=\"" << fmt(X(sol->facility[0]) - 4) << "\" y=\""
          << fmt(Y(sol->facility[1]) - 4)
          << "\" width=\"8\" height=\"8\" fill=\"#22c\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shortest paths and facility location in weighted polyhedral subdivisions"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded Voronoi instance");
    std::string g_kind = "spp", g_out;
    int g_m = 50, g_n = 4;
    unsigned g_seed = 1;
    std::vector<double> g_box = {0, 0, 10, 10};
    gen->add_option("--kind", g_kind)->check(CLI::IsMember({"spp", "weber"}));
    gen->add_option("--m", g_m, "number of regions");
    gen->add_option("--n", g_n, "number of demand points (weber)");
    gen->add_option("--seed", g_seed);
    gen->add_option("--box", g_box, "x0 y0 x1 y1")->expected(4);
    gen->add_option("--out", g_out);

    // shared solve-ish options
    std::string s_instance, s_out, s_formulation = "f2", s_preprocess = "off";
    std::string s_rapid, s_branching = "most_fractional";
    bool s_double_visit = false;
    double s_time_limit = 7200.0, s_gap_tol = 1e-4, s_tol = 1e-5;
    int s_threads = 1;
    auto* solve = app.add_subcommand("solve", "solve an instance and verify the result");
    solve->add_option("--instance", s_instance)->required();
    solve->add_option("--out", s_out, "solution JSON path");
    solve->add_option("--formulation", s_formulation)->check(CLI::IsMember({"f1", "f2"}));
    solve->add_option("--preprocess", s_preprocess, "off, all or a region budget");
    solve->add_option("--time-limit", s_time_limit);
    solve->add_option("--gap-tol", s_gap_tol);
    solve->add_option("--threads", s_threads);
    solve->add_option("--tol", s_tol, "verification tolerance");
    solve->add_option("--branching", s_branching)
        ->check(CLI::IsMember({"most_fractional", "pseudo_cost"}));
    solve->add_option("--rapid-transit", s_rapid, "face spec JSON");
    solve->add_flag("--double-visit", s_double_visit);

    // plot
    auto* plot = app.add_subcommand("plot", "render an instance (and solution) as SVG");
    std::string p_instance, p_solution, p_out;
    plot->add_option("--instance", p_instance)->required();
    plot->add_option("--solution", p_solution);
    plot->add_option("--out", p_out);

    // bench
    auto* bench = app.add_subcommand("bench", "timing table over seeded instances");
    std::string b_kind = "spp", b_formulation = "f2", b_preprocess = "off", b_out;
    std::string b_branching = "most_fractional";
    std::vector<int> b_m;
    int b_runs = 5, b_n = 4;
    unsigned b_seed = 1;
    double b_time_limit = 600.0, b_gap_tol = 1e-4;
    bench->add_option("--kind", b_kind)->check(CLI::IsMember({"spp", "weber"}));
    bench->add_option("--m", b_m, "region counts")->required();
    bench->add_option("--n", b_n, "demand points (weber)");
    bench->add_option("--runs", b_runs, "instances per m");
    bench->add_option("--seed", b_seed);
    bench->add_option("--formulation", b_formulation)->check(CLI::IsMember({"f1", "f2"}));
    bench->add_option("--preprocess", b_preprocess);
    bench->add_option("--time-limit", b_time_limit);
    bench->add_option("--gap-tol", b_gap_tol);
    bench->add_option("--branching", b_branching)
        ->check(CLI::IsMember({"most_fractional", "pseudo_cost"}));
    bench->add_option("--out", b_out);

    // verify
    auto* verify = app.add_subcommand("verify", "check a solution against its instance");
    std::string v_instance, v_solution;
    double v_tol = 1e-5;
    verify->add_option("--instance", v_instance)->required();
    verify->add_option("--solution", v_solution)->required();
    verify->add_option("--tol", v_tol);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            InstanceFile f = generate_instance(g_kind, g_m, g_n, g_seed,
                                               pt2(g_box[0], g_box[1]),
                                               pt2(g_box[2], g_box[3]));
            write_output(g_out, instance_to_json(f));
            return 0;
        }

        if (solve->parsed()) {
            InstanceFile f = parse_instance_json(read_file(s_instance));
            SolveConfig cfg;
            cfg.time_limit_s = s_time_limit;
            cfg.rel_gap_tol = s_gap_tol;
            cfg.branching_rule = s_branching;
            cfg.threads = s_threads;
            const bool use_f2 = s_formulation == "f2";
            const int m_star = parse_preprocess(s_preprocess, f.sub.size());

            SolveOutcome out;
            if (f.has_terminals) {
                SppInstance in = make_spp_instance(f.sub, f.source, f.target);
                if (!s_rapid.empty())
                    in = rapid_transit_transform(
                        in, parse_face_specs(read_file(s_rapid), in.graph.edges.size()));
                if (s_double_visit) in = double_visit_transform(in);
                out = run_spp(in, use_f2, cfg, m_star, s_tol);
            } else {
                if (!s_rapid.empty() || s_double_visit)
                    throw Error("BadArguments", "transforms apply to path instances only");
                WeberInstance in = make_weber_instance(f.sub, f.demands);
                out = run_locp(in, use_f2, cfg, m_star, s_tol);
            }
            if (!s_out.empty()) write_output(s_out, solution_to_json(out.file));

            const char* status = out.report.status == MisocpStatus::Optimal ? "optimal"
                                 : out.report.status == MisocpStatus::TimeLimit
                                     ? "time_limit"
                                     : "infeasible";
            std::printf("status %s value %.9f lb %.9f gap%% %.4f nodes %ld time %.2fs\n",
                        status, out.file.value, out.file.lb, out.file.gap_pct,
                        out.report.nodes, out.report.wall_time_s);
            if (!out.eliminated.empty()) {
                std::printf("eliminated regions:");
                for (int i : out.eliminated) std::printf(" %d", i + 1);
                std::printf("\n");
            }
            std::printf("verification %s (max snell %.3e, max improvement %.3e)\n",
                        out.verified ? "passed" : "FAILED", out.max_snell,
                        out.max_improvement);
            const bool ok_status =
                out.report.status == MisocpStatus::Optimal ||
                (out.report.status == MisocpStatus::TimeLimit && out.report.ub < kInf);
            return out.verified && ok_status ? 0 : 1;
        }

        if (plot->parsed()) {
            InstanceFile f = parse_instance_json(read_file(p_instance));
            SolutionFile sol;
            bool have_sol = !p_solution.empty();
            if (have_sol) sol = parse_solution_json(read_file(p_solution));
            write_output(p_out, plot_svg(f, have_sol ? &sol : nullptr));
            return 0;
        }

        if (bench->parsed()) {
            std::ostringstream csv;
            csv << "m,seed,cpu_s,gap_pct,cpu_aver,cpu_min,cpu_max,gap_aver,gap_min,gap_"
                   "max\n";
            write_output(b_out, csv.str());
            std::string acc = csv.str();
            SolveConfig cfg;
            cfg.time_limit_s = b_time_limit;
            cfg.rel_gap_tol = b_gap_tol;
            cfg.branching_rule = b_branching;
            const bool use_f2 = b_formulation == "f2";
            for (int m : b_m) {
                std::vector<double> cpu, gap;
                for (int k = 0; k < b_runs; ++k) {
                    const unsigned seed = b_seed + 7919u * static_cast<unsigned>(m) +
                                          static_cast<unsigned>(k);
                    InstanceFile f =
                        generate_instance(b_kind, m, b_n, seed, pt2(0, 0), pt2(10, 10));
                    const int m_star = parse_preprocess(b_preprocess, f.sub.size());
                    SolveOutcome out;
                    if (f.has_terminals) {
                        SppInstance in = make_spp_instance(f.sub, f.source, f.target);
                        out = run_spp(in, use_f2, cfg, m_star, 1e-5);
                    } else {
                        WeberInstance in = make_weber_instance(f.sub, f.demands);
                        out = run_locp(in, use_f2, cfg, m_star, 1e-5);
                    }
                    cpu.push_back(out.report.wall_time_s);
                    gap.push_back(out.report.gap_pct);
                    char row[160];
                    std::snprintf(row, sizeof row, "%d,%u,%.3f,%.4f,,,,,,\n", m, seed,
                                  cpu.back(), gap.back());
                    acc += row;
                    write_output(b_out, acc);  // flush partial results
                }
                auto aver = [](const std::vector<double>& v) {
                    double s = 0;
                    for (double x : v) s += x;
                    return s / v.size();
                };
                char row[200];
                std::snprintf(row, sizeof row, "%d,,,,%.3f,%.3f,%.3f,%.4f,%.4f,%.4f\n", m,
                              aver(cpu), *std::min_element(cpu.begin(), cpu.end()),
                              *std::max_element(cpu.begin(), cpu.end()), aver(gap),
                              *std::min_element(gap.begin(), gap.end()),
                              *std::max_element(gap.begin(), gap.end()));
                acc += row;
                write_output(b_out, acc);
            }
            return 0;
        }

        if (verify->parsed()) {
            InstanceFile f = parse_instance_json(read_file(v_instance));
            SolutionFile sf = parse_solution_json(read_file(v_solution));
            json rep;
            bool passed = false;
            if (f.has_terminals) {
                SppInstance in = make_spp_instance(f.sub, f.source, f.target);
                PathSolution sol;
                sol.value = sf.value;
                for (int r : sf.path) sol.path.push_back(r - 1);
                sol.gates = sf.gates;
                VerifyReport vr = verify_path_optimality(in, sol, v_tol);
                passed = vr.passed;
                rep["passed"] = vr.passed;
                rep["max_snell"] = vr.max_snell;
                rep["max_improvement"] = vr.max_improvement;
                rep["gates"] = json::array();
                for (const auto& g : vr.gates)
                    rep["gates"].push_back({{"snell", g.snell},
                                            {"improvement", g.improvement}});
            } else {
                WeberInstance in = make_weber_instance(f.sub, f.demands);
                if (!sf.has_facility)
                    throw Error("BadSolutionFile", "weber solution needs a facility");
                const int fr = locate_point(in.sub, sf.facility);
                // the claimed optimum cannot beat any attainable placement
                const double bound = weber_route_bound(in, sf.facility);
                passed = sf.value <= bound + v_tol * std::max(1.0, std::abs(sf.value));
                rep["passed"] = passed;
                rep["facility_region"] = fr + 1;
                rep["route_bound_at_facility"] = bound;
            }
            std::cout << rep.dump(2) << "\n";
            return passed ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
