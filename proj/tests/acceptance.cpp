// End-to-end acceptance suite: one pass/fail line per criterion.
#include "wrp/norms.hpp"
#include "wrp/preprocess.hpp"
#include "wrp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

using namespace wrp;

namespace {

Vec pt(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void report(int crit, bool ok, const char* fmt, ...) {
    if (!ok) ++failures;
    std::printf("criterion %2d: %s  ", crit, ok ? "PASS" : "FAIL");
    va_list args;
    va_start(args, fmt);
    std::vprintf(fmt, args);
    va_end(args);
    std::printf("\n");
    std::fflush(stdout);
}

Subdivision random_voronoi(int m, unsigned seed, bool unit_weights = false) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<Vec> seeds;
    for (int i = 0; i < m; ++i) seeds.push_back(pt(u(rng), u(rng)));
    Subdivision sub = voronoi_subdivision(seeds, pt(0, 0), pt(10, 10));
    const char* menu[5] = {"1", "3/2", "2", "3", "inf"};
    std::uniform_int_distribution<int> pick(0, 4);
    std::uniform_real_distribution<double> w(0.5, 3.0);
    for (auto& r : sub.regions) {
        r.p = PNorm::parse(menu[pick(rng)]);
        r.weight = unit_weights ? 1.0 : w(rng);
    }
    return sub;
}

SppInstance seeded_spp(int m, unsigned seed) {
    for (unsigned s = seed;; s += 100) {
        SppInstance in =
            make_spp_instance(random_voronoi(m, s), pt(0.5, 0.5), pt(9.5, 9.5));
        if (in.s != in.t) return in;
    }
}

WeberInstance seeded_weber(int m, int n, unsigned seed) {
    Subdivision sub = random_voronoi(m, seed);
    std::mt19937 rng(seed * 13);
    std::uniform_real_distribution<double> u(0.5, 9.5);
    std::vector<Demand> dem;
    for (int l = 0; l < n; ++l) dem.push_back({pt(u(rng), u(rng)), 1.0 + l});
    return make_weber_instance(sub, dem);
}

SppInstance strips_instance() {
    std::vector<Region> regs(3);
    regs[0].polytope = make_polytope(2, {pt(-1, -2), pt(1, -2), pt(1, 4), pt(-1, 4)});
    regs[1].polytope = make_polytope(2, {pt(1, -2), pt(3, -2), pt(3, 4), pt(1, 4)});
    regs[2].polytope = make_polytope(2, {pt(3, -2), pt(7, -2), pt(7, 4), pt(3, 4)});
    regs[0].weight = 1.0;
    regs[1].weight = 2.0;
    regs[2].weight = 3.0;
    return make_spp_instance(make_subdivision(2, std::move(regs)), pt(0, 0), pt(6, 2));
}

// Snell residual of gate g of a decoded path, with the gate moved to b.
double gate_residual(const SppInstance& in, const PathSolution& sol, std::size_t g,
                     const Vec& b) {
    const Vec a = g == 0 ? in.source : sol.gates[g - 1];
    const Vec c = g + 1 < sol.gates.size() ? sol.gates[g + 1] : in.target;
    const int i = sol.path[g], j = sol.path[g + 1];
    const Polytope& F = in.graph.edges[in.graph.edge_index(i, j)].face;
    GateContext ctx = make_gate_context(F, a, b, c);
    return snell_residual(ctx, in.sub.regions[i].p, in.sub.regions[j].p,
                          in.sub.regions[i].weight, in.sub.regions[j].weight);
}

}  // namespace

int main() {
    // 1. triangle-inequality fixture: D(s,t)=54 > 16+16 = D(s,u)+D(u,t)
    {
        const auto t0 = std::chrono::steady_clock::now();
        TriangleDemo d = triangle_violation_demo();
        const double dt = elapsed_s(t0);
        const bool ok = std::abs(d.d_st - 54.0) <= 1e-6 && std::abs(d.d_su - 16.0) <= 1e-6 &&
                        std::abs(d.d_ut - 16.0) <= 1e-6 && d.violated && dt < 5.0;
        report(1, ok, "distances %.6f/%.6f/%.6f, violation %s (%.1fs)", d.d_st, d.d_su,
               d.d_ut, d.violated ? "holds" : "missing", dt);
    }

    // 2. three-strip fixture against the two-gate brute-force oracle
    {
        const auto t0 = std::chrono::steady_clock::now();
        SppInstance in = strips_instance();
        SppResult r = solve_spp(in, true);
        polish_gates(in, r.sol);
        VerifyReport vr = verify_path_optimality(in, r.sol);

        auto cost = [](double y1, double y2) {
            return std::hypot(1.0, y1) + 2.0 * std::hypot(2.0, y2 - y1) +
                   3.0 * std::hypot(3.0, 2.0 - y2);
        };
        double b1 = 0, b2 = 0, bv = cost(0, 0);
        for (double y1 = -2.0; y1 <= 4.0; y1 += 1e-3)
            for (double y2 = -2.0; y2 <= 4.0; y2 += 1e-3)
                if (double v = cost(y1, y2); v < bv) bv = v, b1 = y1, b2 = y2;
        for (double step = 1e-3; step > 1e-12; step *= 0.5)  // local pattern polish
            for (int k = 0; k < 4; ++k) {
                const double c1[4] = {step, -step, 0, 0}, c2[4] = {0, 0, step, -step};
                if (double v = cost(b1 + c1[k], b2 + c2[k]); v < bv)
                    bv = v, b1 += c1[k], b2 += c2[k];
            }
        PathSolution oracle;
        oracle.value = bv;
        oracle.path = {0, 1, 2};
        oracle.gates = {pt(1, b1), pt(3, b2)};
        VerifyReport vo = verify_path_optimality(in, oracle);

        const double dt = elapsed_s(t0);
        const double rel = std::abs(r.sol.value - bv) / std::max(1.0, std::abs(bv));
        const bool ok = rel <= 1e-4 && vr.max_snell <= 1e-5 && vo.max_snell <= 1e-5 &&
                        vr.gates.size() == 2 && dt < 30.0;
        report(2, ok, "value %.9f vs oracle %.9f (rel %.2e), snell %.2e/%.2e (%.1fs)",
               r.sol.value, bv, rel, vr.max_snell, vo.max_snell, dt);
    }

    // 3. formulation/oracle equivalence on 20 seeded Voronoi instances
    std::vector<SppInstance> insts;
    std::vector<BruteForceResult> oracles;
    std::vector<PathSolution> f2_sols;
    {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            SppInstance in = seeded_spp(4 + k % 5, 1000u + k);
            BruteForceResult bf = brute_force_spp(in);
            SppResult r1 = solve_spp(in, false);
            SppResult r2 = solve_spp(in, true);
            polish_gates(in, r2.sol);
            const double scale = std::max(1.0, std::abs(bf.value));
            worst = std::max({worst, std::abs(r1.report.ub - bf.value) / scale,
                              std::abs(r2.report.ub - bf.value) / scale});
            insts.push_back(std::move(in));
            oracles.push_back(std::move(bf));
            f2_sols.push_back(std::move(r2.sol));
        }
        const double dt = elapsed_s(t0);
        report(3, worst <= 1e-5 && dt < 600.0,
               "20 instances, max |F1,F2 - brute force| rel %.2e (%.1fs)", worst, dt);
    }

    // 4. relaxation dominance on 20 path and 10 location instances
    {
        int violations = 0;
        double min_slack = kInf;
        for (const SppInstance& in : insts) {
            try {
                auto [z1, z2] = dominance_check_spp(in);
                min_slack = std::min(min_slack, z2 - z1);
            } catch (const Error&) {
                ++violations;
            }
        }
        for (int k = 0; k < 10; ++k) {
            try {
                auto [z1, z2] = dominance_check_locp(seeded_weber(4 + k % 3, 3, 2000u + k));
                min_slack = std::min(min_slack, z2 - z1);
            } catch (const Error&) {
                ++violations;
            }
        }
        report(4, violations == 0, "%d violations, min slack zeta' - zeta = %.2e",
               violations, min_slack);
    }

    // 5. preprocessing never cuts the optimum; the reduced model reproduces it
    {
        bool ok = true;
        double worst = 0.0;
        for (std::size_t k = 0; k < insts.size(); ++k) {
            const SppInstance& in = insts[k];
            EliminationList el = preprocess_spp(in, in.sub.size());
            for (int r : oracles[k].path)
                if (std::find(el.eliminated.begin(), el.eliminated.end(), r) !=
                    el.eliminated.end())
                    ok = false;
            BuiltModel bm = build_spp_f2(in);
            apply_eliminations(bm.model, bm.atlas, in.arcs, el.eliminated);
            auto [rep, x] = solve_misocp(bm.model);
            worst = std::max(worst, std::abs(rep.ub - oracles[k].value) /
                                        std::max(1.0, std::abs(oracles[k].value)));
        }
        for (int k = 0; k < 10; ++k) {
            WeberInstance in = seeded_weber(4 + k % 3, 3, 2000u + k);
            LocpResult opt = solve_locp(in, true);
            EliminationList el = preprocess_locp(in, in.sub.size());
            if (std::find(el.eliminated.begin(), el.eliminated.end(),
                          opt.sol.facility_region) != el.eliminated.end())
                ok = false;
            BuiltModel bm = build_locp_f2(in);
            apply_eliminations(bm.model, bm.atlas, in.arcs, el.eliminated);
            auto [rep, x] = solve_misocp(bm.model);
            worst = std::max(worst, std::abs(rep.ub - opt.report.ub) /
                                        std::max(1.0, std::abs(opt.report.ub)));
        }
        report(5, ok && worst <= 1e-6,
               "optimal regions kept %s, reduced-model max deviation %.2e",
               ok ? "everywhere" : "VIOLATED", worst);
    }

    // 6. polar identities and compiled norm blocks
    {
        std::mt19937 rng(99);
        std::normal_distribution<double> g(0.0, 1.0);
        double worst_polar = 0.0;
        const PNorm ps[4] = {PNorm::rational(3, 2), PNorm::two(), PNorm::rational(5, 2),
                             PNorm::rational(3, 1)};
        for (int k = 0; k < 1000; ++k) {
            Vec v(3);
            v << g(rng), g(rng), g(rng);
            for (const PNorm& p : ps) {
                const Vec vp = polar_vector(v, p);
                const double n = lp_norm(v, p);
                worst_polar = std::max(
                    {worst_polar, std::abs(lp_norm(vp, p.dual()) - n),
                     std::abs(v.dot(vp) - n * n),
                     (polar_vector(vp, p.dual()) - v).cwiseAbs().maxCoeff()});
            }
        }
        double worst_block = 0.0;
        for (const char* s : {"1", "3/2", "2", "3", "inf"}) {
            std::vector<std::pair<Vec, Vec>> samples;
            for (int k = 0; k < 100; ++k) {
                Vec a(3), b(3);
                a << g(rng), g(rng), g(rng);
                b << g(rng), g(rng), g(rng);
                samples.push_back({a, b});
            }
            worst_block = std::max(worst_block, verify_block(PNorm::parse(s), samples));
        }
        report(6, worst_polar <= 1e-9 && worst_block <= 1e-6,
               "polar identity error %.2e, norm block error %.2e", worst_polar, worst_block);
    }

    // 7. refraction balance at optimal gates; perturbation breaks it
    {
        double worst = 0.0, weakest = kInf;
        int perturbed = 0;
        for (std::size_t k = 0; k < insts.size(); ++k) {
            const SppInstance& in = insts[k];
            const PathSolution& sol = f2_sols[k];
            VerifyReport vr = verify_path_optimality(in, sol);
            for (const GateCheck& gc : vr.gates)
                if (gc.snell >= 0.0) worst = std::max(worst, gc.snell);
            for (std::size_t g = 0; g < sol.gates.size(); ++g) {
                if (vr.gates[g].snell < 0.0) continue;
                const int i = sol.path[g], j = sol.path[g + 1];
                const Polytope& F = in.graph.edges[in.graph.edge_index(i, j)].face;
                const Vec* far = nullptr;
                double dist = 0.06;  // the 0.05 move must stay on the face
                for (const Vec& v : F.vertices)
                    if (double d = (v - sol.gates[g]).norm(); d > dist) dist = d, far = &v;
                if (!far) continue;
                const Vec b = sol.gates[g] + 0.05 * (*far - sol.gates[g]).normalized();
                weakest = std::min(weakest, gate_residual(in, sol, g, b));
                ++perturbed;
                break;  // one perturbed gate per path
            }
        }
        report(7, worst <= 1e-5 && perturbed > 0 && weakest > 1e-3,
               "max residual %.2e at optima; %d perturbed gates, min residual %.2e", worst,
               perturbed, weakest);
    }

    // 8. double-visit and rapid-transit extensions
    {
        bool ok = true;
        SolveConfig cfg;
        cfg.time_limit_s = 60.0;
        for (std::size_t k = 0; k < insts.size(); ++k) {
            SppInstance dv = double_visit_transform(insts[k]);
            BuiltModel bm = build_spp_f2(dv);
            auto [rep, x] = solve_misocp(bm.model, cfg, oracles[k].value * (1.0 + 1e-9));
            if (rep.ub > oracles[k].value + 1e-7) ok = false;
        }
        // constructed fixture: crossing the cheap region twice is strictly better
        std::vector<Region> regs(3);
        regs[0].polytope =
            make_polytope(2, {pt(-10, -5), pt(0, -5), pt(0, 15), pt(-10, 15)});
        regs[1].polytope =
            make_polytope(2, {pt(0, -5), pt(0.5, -5), pt(0.5, 15), pt(0, 15)});
        regs[2].polytope =
            make_polytope(2, {pt(0.5, -5), pt(10, -5), pt(10, 15), pt(0.5, 15)});
        regs[0].weight = 0.1;
        regs[1].weight = 5.0;
        regs[2].weight = 2.0;
        SppInstance fx = make_spp_instance(make_subdivision(2, std::move(regs)),
                                           pt(0.25, 0), pt(1, 10));
        const double d1 = solve_spp(fx, true).report.ub;
        const double d2 = solve_spp(double_visit_transform(fx), true).report.ub;
        const bool strict = d2 < d1 - 1e-3;

        // rapid transit: a cheap boundary medium beats both heavy strips
        std::vector<Region> rt(2);
        rt[0].polytope = make_polytope(2, {pt(0, 0), pt(10, 0), pt(10, 5), pt(0, 5)});
        rt[1].polytope = make_polytope(2, {pt(0, -5), pt(10, -5), pt(10, 0), pt(0, 0)});
        rt[0].weight = rt[1].weight = 5.0;
        SppInstance heavy = make_spp_instance(make_subdivision(2, std::move(rt)),
                                              pt(0, 1), pt(10, -1));
        const double plain = solve_spp(heavy, true).report.ub;
        SppInstance rapid = rapid_transit_transform(
            heavy, std::vector<FaceSpec>(heavy.graph.edges.size(), {PNorm::two(), 1.0}));
        SppResult rr = solve_spp(rapid, true);
        polish_gates(rapid, rr.sol);
        const bool faster = rr.report.ub < plain - 1e-3 &&
                            verify_path_optimality(rapid, rr.sol).passed;
        report(8, ok && strict && faster,
               "D2<=D on %zu instances %s; fixture %.6f < %.6f; transit %.6f < %.6f %s",
               insts.size(), ok ? "holds" : "VIOLATED", d2, d1, rr.report.ub, plain,
               faster ? "(verified)" : "UNVERIFIED");
    }

    // 9. fifty-region disaggregated solve; CPU figures are hardware-bound,
    // so only the gap target is asserted and actual numbers are reported
    {
        std::mt19937 rng(22u);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        std::vector<Vec> seeds;
        for (int i = 0; i < 50; ++i) seeds.push_back(pt(u(rng), u(rng)));
        Subdivision sub = voronoi_subdivision(seeds, pt(0, 0), pt(10, 10));
        const char* menu[5] = {"1", "3/2", "2", "3", "inf"};
        std::uniform_int_distribution<int> pick(0, 4);
        for (auto& r : sub.regions) r.p = PNorm::parse(menu[pick(rng)]);
        SppInstance in = make_spp_instance(sub, pt(0, 0), pt(10, 10));

        SolveConfig cfg;
        cfg.time_limit_s = 600.0;
        cfg.rel_gap_tol = 5e-5;
        cfg.branching_rule = "pseudo_cost";
        const auto t0 = std::chrono::steady_clock::now();
        SppResult r = solve_spp(in, true, cfg);
        const double dt = elapsed_s(t0);
        report(9, r.report.gap_pct <= 0.01 && dt < 600.5,
               "m=50: value %.6f, gap %.4f%%, %ld nodes, %.1fs", r.report.ub,
               r.report.gap_pct, r.report.nodes, dt);
    }

    // 10. single-demand location problem collapses onto the demand point
    {
        WeberInstance in = seeded_weber(4, 1, 3000u);
        bool ok = true;
        double worst = 0.0;
        for (bool f2 : {false, true}) {
            LocpResult r = solve_locp(in, f2);
            worst = std::max({worst, r.report.ub,
                              (r.sol.facility - in.demands[0].point).cwiseAbs().maxCoeff()});
            if (r.report.ub > 1e-7 ||
                (r.sol.facility - in.demands[0].point).cwiseAbs().maxCoeff() > 1e-7)
                ok = false;
        }
        report(10, ok, "objective and facility offset <= %.2e for both formulations", worst);
    }

    std::printf("%s\n", failures == 0 ? "all criteria passed" : "CRITERIA FAILED");
    return failures;
}
