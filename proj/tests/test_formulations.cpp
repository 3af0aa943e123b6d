#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wrp/formulations.hpp"
#include "wrp/solver.hpp"

#include <cmath>
#include <random>

using namespace wrp;

namespace {

Vec pt(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

Polytope poly(std::initializer_list<Vec> pts) {
    return make_polytope(2, std::vector<Vec>(pts));
}

// three vertical strips split at x=1 and x=3, euclidean norms, weights 1,2,3
Subdivision strips3() {
    std::vector<Region> regs(3);
    regs[0].polytope = poly({pt(-1, -2), pt(1, -2), pt(1, 4), pt(-1, 4)});
    regs[1].polytope = poly({pt(1, -2), pt(3, -2), pt(3, 4), pt(1, 4)});
    regs[2].polytope = poly({pt(3, -2), pt(7, -2), pt(7, 4), pt(3, 4)});
    for (int i = 0; i < 3; ++i) {
        regs[i].p = PNorm::two();
        regs[i].weight = i + 1.0;
    }
    return make_subdivision(2, std::move(regs));
}

// three diagonal strips split at y-x=0 and y-x=5, l1 norms, weights 1,2,3
// top to bottom; the triangle-inequality counterexample geometry
Subdivision diagonal3() {
    std::vector<Region> regs(3);
    regs[0].polytope = poly({pt(-2, 3), pt(7, 12), pt(-2, 12)});
    regs[1].polytope = poly({pt(-2, -2), pt(12, 12), pt(7, 12), pt(-2, 3)});
    regs[2].polytope = poly({pt(-2, -2), pt(12, -2), pt(12, 12)});
    for (int i = 0; i < 3; ++i) {
        regs[i].p = PNorm::one();
        regs[i].weight = i + 1.0;
    }
    return make_subdivision(2, std::move(regs));
}

Subdivision random_voronoi(int m, unsigned seed) {
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
        r.weight = w(rng);
    }
    return sub;
}

bool in_face(const Polytope& F, const Vec& y) { return contains(F, y, 1e-7); }

}  // namespace

TEST_CASE("path-graph instance has one binary per arc") {
    SppInstance in = make_spp_instance(strips3(), pt(0, 0), pt(6, 2));
    CHECK(in.s == 0);
    CHECK(in.t == 2);
    REQUIRE(in.arcs.size() == 4);
    BuiltModel f1 = build_spp_f1(in);
    CHECK(f1.model.num_binaries() == 4);
    REQUIRE(f1.atlas.flows.size() == 1);
    CHECK(f1.atlas.flows[0].d.size() == 3);
    for (const auto& lam : f1.atlas.flows[0].lambda) CHECK(lam.size() == 2);
}

TEST_CASE("terminals joined by a perpendicular straight segment") {
    std::vector<Region> regs(2);
    regs[0].polytope = poly({pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)});
    regs[1].polytope = poly({pt(1, 0), pt(2, 0), pt(2, 1), pt(1, 1)});
    SppInstance in =
        make_spp_instance(make_subdivision(2, std::move(regs)), pt(0.5, 0.5), pt(1.5, 0.5));
    for (bool f2 : {false, true}) {
        SppResult r = solve_spp(in, f2);
        CHECK(r.report.ub == doctest::Approx(1.0).epsilon(1e-7));
        REQUIRE(r.sol.gates.size() == 1);
        CHECK(r.sol.gates[0][0] == doctest::Approx(1.0));
        CHECK(r.sol.gates[0][1] == doctest::Approx(0.5).epsilon(1e-5));
    }
}

TEST_CASE("co-located terminals use the closed form") {
    SppInstance in = make_spp_instance(diagonal3(), pt(1, 0), pt(10, 9));
    CHECK(in.s == in.t);
    CHECK(spp_trivial_value(in) == doctest::Approx(54.0).epsilon(1e-9));
    CHECK_THROWS_WITH_AS(build_spp_f1(in), doctest::Contains("SameRegion"), Error);
    CHECK_THROWS_WITH_AS(build_spp_f2(in), doctest::Contains("SameRegion"), Error);
    SppResult r = solve_spp(in);
    CHECK(r.report.ub == doctest::Approx(54.0));
    CHECK(r.sol.path == std::vector<int>{2});
}

TEST_CASE("unreachable target region is rejected") {
    std::vector<Region> regs(2);
    regs[0].polytope = poly({pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)});
    regs[1].polytope = poly({pt(5, 0), pt(6, 0), pt(6, 1), pt(5, 1)});
    SppInstance in =
        make_spp_instance(make_subdivision(2, std::move(regs)), pt(0.5, 0.5), pt(5.5, 0.5));
    CHECK_THROWS_WITH_AS(build_spp_f1(in), doctest::Contains("DisconnectedGraph"), Error);
    CHECK_THROWS_WITH_AS(build_spp_f2(in), doctest::Contains("DisconnectedGraph"), Error);
}

TEST_CASE("solved instance satisfies coupling and gate membership") {
    SppInstance in = make_spp_instance(random_voronoi(5, 42), pt(1, 1), pt(9, 9));
    REQUIRE(in.s != in.t);
    for (bool f2 : {false, true}) {
        BuiltModel bm = f2 ? build_spp_f2(in) : build_spp_f1(in);
        auto [rep, x] = solve_misocp(bm.model);
        REQUIRE(rep.status == MisocpStatus::Optimal);
        const PathVars& pv = bm.atlas.flows[0];
        for (std::size_t a = 0; a < in.arcs.size(); ++a) {
            double lam_sum = 0.0;
            for (Index v : pv.lambda[a]) lam_sum += x[v];
            CHECK(std::abs(lam_sum - x[pv.z[a]]) <= 1e-7);
        }
        PathSolution sol = decode_spp(in, bm.atlas, x, rep.ub);
        // simplicity and gate membership
        std::vector<bool> seen(in.sub.size(), false);
        for (int r : sol.path) {
            CHECK(!seen[r]);
            seen[r] = true;
        }
        for (std::size_t k = 0; k < sol.gates.size(); ++k) {
            int e = in.graph.edge_index(sol.path[k], sol.path[k + 1]);
            REQUIRE(e >= 0);
            CHECK(in_face(in.graph.edges[e].face, sol.gates[k]));
        }
        // re-evaluating the decoded path reproduces the incumbent
        FixedPathResult f = fixed_path_eval(in, sol.path);
        CHECK(f.value == doctest::Approx(rep.ub).epsilon(1e-6));
    }
}

TEST_CASE("both formulations match the enumeration oracle") {
    SppInstance in = make_spp_instance(random_voronoi(5, 7), pt(0.5, 9.0), pt(9.5, 1.0));
    REQUIRE(in.s != in.t);
    BruteForceResult bf = brute_force_spp(in);
    SppResult s1 = solve_spp(in, false);
    SppResult s2 = solve_spp(in, true);
    CHECK(s1.report.ub == doctest::Approx(bf.value).epsilon(1e-5));
    CHECK(s2.report.ub == doctest::Approx(bf.value).epsilon(1e-5));
    CHECK(s2.sol.path == bf.path);
}

TEST_CASE("disaggregation tightens the relaxation") {
    for (unsigned seed : {11u, 12u, 13u, 14u}) {
        SppInstance in = make_spp_instance(random_voronoi(6, seed), pt(1, 2), pt(9, 8));
        if (in.s == in.t) continue;
        double zeta = solve_relaxation(relax(build_spp_f1(in).model)).objective;
        double zeta2 = solve_relaxation(relax(build_spp_f2(in).model)).objective;
        CHECK(zeta <= zeta2 + 1e-7);
        SppResult opt = solve_spp(in, true);
        CHECK(zeta2 <= opt.report.ub + 1e-6);
    }
}

TEST_CASE("single demand point gets a zero-cost facility") {
    WeberInstance in = make_weber_instance(strips3(), {{pt(2.0, 1.0), 1.0}});
    for (bool f2 : {false, true}) {
        LocpResult r = solve_locp(in, f2);
        CHECK(std::abs(r.report.ub) <= 1e-7);
        CHECK(r.sol.facility_region == 1);
        CHECK((r.sol.facility - pt(2.0, 1.0)).norm() <= 1e-7);
    }
}

TEST_CASE("weber formulations agree and decode a consistent facility") {
    WeberInstance in = make_weber_instance(
        strips3(), {{pt(0.0, 0.0), 1.0}, {pt(6.0, 2.0), 1.0}, {pt(2.0, 3.0), 2.0}});
    LocpResult r1 = solve_locp(in, false);
    LocpResult r2 = solve_locp(in, true);
    CHECK(r1.report.ub == doctest::Approx(r2.report.ub).epsilon(1e-5));
    CHECK(contains(in.sub.regions[r2.sol.facility_region].polytope, r2.sol.facility, 1e-7));
    // objective equals the recomputed sum of weighted route lengths
    double total = 0.0;
    for (std::size_t l = 0; l < in.demands.size(); ++l)
        total += in.demands[l].weight * r2.sol.routes[l].value;
    CHECK(total == doctest::Approx(r2.report.ub).epsilon(1e-6));
}

TEST_CASE("weber relaxation dominance") {
    for (unsigned seed : {21u, 22u, 23u}) {
        Subdivision sub = random_voronoi(4, seed);
        std::mt19937 rng(seed * 17);
        std::uniform_real_distribution<double> u(0.5, 9.5);
        std::vector<Demand> dem;
        for (int l = 0; l < 3; ++l) dem.push_back({pt(u(rng), u(rng)), 1.0 + l});
        WeberInstance in = make_weber_instance(sub, dem);
        double zeta = solve_relaxation(relax(build_locp_f1(in).model)).objective;
        double zeta2 = solve_relaxation(relax(build_locp_f2(in).model)).objective;
        CHECK(zeta <= zeta2 + 1e-7);
    }
}

TEST_CASE("rapid transit expansion of a two-region instance") {
    std::vector<Region> regs(2);
    regs[0].polytope = poly({pt(0, 0), pt(10, 0), pt(10, 5), pt(0, 5)});
    regs[1].polytope = poly({pt(0, -5), pt(10, -5), pt(10, 0), pt(0, 0)});
    regs[0].weight = regs[1].weight = 5.0;
    SppInstance in =
        make_spp_instance(make_subdivision(2, std::move(regs)), pt(0, 1), pt(10, -1));
    REQUIRE(in.graph.edges.size() == 1);
    double direct = solve_spp(in, true).report.ub;
    CHECK(direct == doctest::Approx(5.0 * std::sqrt(104.0)).epsilon(1e-5));

    // an expensive boundary is never traversed laterally
    SppInstance slow = rapid_transit_transform(in, {{PNorm::two(), 1e4}});
    CHECK(slow.sub.size() == 3);
    CHECK(slow.graph.has_edge(0, 2));
    CHECK(slow.graph.has_edge(1, 2));
    CHECK(!slow.graph.has_edge(0, 1));
    double via_slow = solve_spp(slow, true).report.ub;
    CHECK(via_slow == doctest::Approx(direct).epsilon(1e-5));

    // a cheap boundary acts as a rapid transit line
    SppInstance fast = rapid_transit_transform(in, {{PNorm::two(), 1.0}});
    SppResult r = solve_spp(fast, true);
    CHECK(r.report.ub < direct - 1.0);
    CHECK(r.report.ub == doctest::Approx(5.0 + 10.0 + 5.0).epsilon(0.05));
    CHECK(r.sol.path == std::vector<int>{0, 2, 1});
}

TEST_CASE("rapid transit requires one spec per edge") {
    SppInstance in = make_spp_instance(strips3(), pt(0, 0), pt(6, 2));
    CHECK_THROWS_WITH_AS(rapid_transit_transform(in, {}),
                         doctest::Contains("MissingFaceNorm"), Error);
}

TEST_CASE("double visit duplicates regions without twin edges") {
    SppInstance in = make_spp_instance(strips3(), pt(0, 0), pt(6, 2));
    SppInstance dv = double_visit_transform(in);
    CHECK(dv.sub.size() == 6);
    for (int i = 0; i < 3; ++i) CHECK(!dv.graph.has_edge(i, i + 3));
    CHECK(dv.graph.has_edge(0, 4));
    CHECK(dv.graph.has_edge(3, 1));
    // feasibility inclusion: the doubled optimum never exceeds the simple one
    double d1 = solve_spp(in, true).report.ub;
    double d2 = solve_spp(dv, true).report.ub;
    CHECK(d2 <= d1 + 1e-6);
}

TEST_CASE("a cheap side region rewards visiting a strip twice") {
    std::vector<Region> regs(3);
    regs[0].polytope = poly({pt(-10, -5), pt(0, -5), pt(0, 15), pt(-10, 15)});
    regs[1].polytope = poly({pt(0, -5), pt(0.5, -5), pt(0.5, 15), pt(0, 15)});
    regs[2].polytope = poly({pt(0.5, -5), pt(10, -5), pt(10, 15), pt(0.5, 15)});
    regs[0].weight = 0.1;
    regs[1].weight = 5.0;
    regs[2].weight = 2.0;
    for (auto& r : regs) r.p = PNorm::two();
    SppInstance in =
        make_spp_instance(make_subdivision(2, std::move(regs)), pt(0.25, 0), pt(1, 10));
    double simple = solve_spp(in, true).report.ub;
    SppResult twice = solve_spp(double_visit_transform(in), true);
    CHECK(twice.report.ub < simple - 1e-3);
    // the winning walk leaves through the cheap region and comes back
    std::vector<int> mods;
    for (int r : twice.sol.path) mods.push_back(r % 3);
    CHECK(mods == std::vector<int>{1, 0, 1, 2});
}

TEST_CASE("instance json round trip") {
    InstanceFile f;
    f.sub = strips3();
    f.has_terminals = true;
    f.source = pt(0, 0);
    f.target = pt(6, 2);
    std::string text = instance_to_json(f);
    InstanceFile g = parse_instance_json(text);
    CHECK(g.sub.size() == 3);
    CHECK(g.sub.regions[1].weight == 2.0);
    CHECK(g.sub.regions[1].p.str() == "2");
    CHECK(instance_to_json(g) == text);

    InstanceFile w;
    w.sub = strips3();
    w.demands = {{pt(1, 1), 2.5}, {pt(4, 0), 1.0}};
    std::string wt = instance_to_json(w);
    InstanceFile w2 = parse_instance_json(wt);
    REQUIRE(w2.demands.size() == 2);
    CHECK(w2.demands[0].weight == 2.5);
    CHECK(instance_to_json(w2) == wt);

    CHECK_THROWS_WITH_AS(parse_instance_json("{\"dim\":2}"),
                         doctest::Contains("BadInstanceFile"), Error);
    CHECK_THROWS_WITH_AS(parse_instance_json("not json"),
                         doctest::Contains("BadInstanceFile"), Error);
}

TEST_CASE("solution json round trip") {
    SolutionFile s;
    s.value = 16.0;
    s.lb = 15.9984;
    s.gap_pct = 0.01;
    s.path = {3, 2, 1};
    s.gates = {pt(1, 1), pt(1, 6)};
    std::string text = solution_to_json(s);
    SolutionFile t = parse_solution_json(text);
    CHECK(t.value == 16.0);
    CHECK(t.path == std::vector<int>{3, 2, 1});
    REQUIRE(t.gates.size() == 2);
    CHECK(t.gates[1][1] == 6.0);
    CHECK(!t.has_facility);
    s.has_facility = true;
    s.facility = pt(2, 3);
    SolutionFile u = parse_solution_json(solution_to_json(s));
    REQUIRE(u.has_facility);
    CHECK(u.facility[0] == 2.0);
}
