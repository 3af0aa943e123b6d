#pragma once

#include "wrp/formulations.hpp"
#include "wrp/socp.hpp"

#include <string>
#include <utility>
#include <vector>

namespace wrp {

struct SolveConfig {
    double time_limit_s = 7200.0;
    double rel_gap_tol = 1e-4;
    double feas_tol = 1e-8;
    double integrality_tol = 1e-6;
    long node_limit = 1000000000L;
    std::string branching_rule = "most_fractional";
    int threads = 1;
};

enum class MisocpStatus { Optimal, TimeLimit, Infeasible };

struct SolveReport {
    MisocpStatus status = MisocpStatus::Optimal;
    double ub = kInf;
    double lb = -kInf;
    double gap_pct = 100.0;  // 100*(ub-lb)/max(|ub|,1e-12), 100 with no incumbent
    long nodes = 0;
    double wall_time_s = 0.0;
};

// Best-first branch and bound over the interior-point relaxation engine.
// Branches on the most fractional binary (ties: lowest index); an optional
// warm-start upper bound prunes from the start.
std::pair<SolveReport, Vec> solve_misocp(const ConicModel& m, const SolveConfig& cfg = {},
                                         double warm_ub = kInf);

struct FixedPathResult {
    double value = 0.0;
    std::vector<Vec> gates;
};

// Inner minimization of the path problem with the region sequence fixed:
// one gate per crossed face, each a convex combination of the face vertices.
FixedPathResult fixed_path_eval(const SppInstance& inst, const std::vector<int>& path);

// Same, but between arbitrary endpoints a in path.front(), b in path.back()
// (used for Weber routes whose sink is the facility point).
FixedPathResult fixed_route_eval(const Subdivision& sub, const AdjacencyGraph& graph,
                                 const std::vector<int>& path, const Vec& a, const Vec& b);

struct BruteForceResult {
    double value = kInf;
    std::vector<int> path;
    std::vector<Vec> gates;
};

// Enumerates every simple s-t region sequence and evaluates each with the
// fixed-path program; the independent oracle for small instances.
BruteForceResult brute_force_spp(const SppInstance& inst, long max_paths = 100000);

// Unweighted Euclidean median of the demand points (Weber warm start).
Vec euclidean_weber_point(const WeberInstance& inst);

// Upper bound from placing the facility at x and routing every demand along
// its segment-induced path; optionally returns the decoded solution.
double weber_route_bound(const WeberInstance& inst, const Vec& x,
                         WeberSolution* sol = nullptr);

struct SppResult {
    SolveReport report;
    PathSolution sol;
};

struct LocpResult {
    SolveReport report;
    WeberSolution sol;
};

// End-to-end solves: build the chosen formulation, warm-start from the
// segment-induced path heuristic, run branch and bound, decode.
SppResult solve_spp(const SppInstance& inst, bool use_f2 = true,
                    const SolveConfig& cfg = {});
LocpResult solve_locp(const WeberInstance& inst, bool use_f2 = true,
                      const SolveConfig& cfg = {});

}  // namespace wrp
