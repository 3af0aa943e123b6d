#include "wrp/solver.hpp"

#include "wrp/norms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <queue>
#include <set>

namespace wrp {

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Node {
    double lb;
    long id;
    std::vector<std::pair<Index, double>> fix;  // binary variable, fixed value
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.lb != b.lb) return a.lb > b.lb;  // min-heap on the bound
        return a.id > b.id;
    }
};

}  // namespace

std::pair<SolveReport, Vec> solve_misocp(const ConicModel& m, const SolveConfig& cfg,
                                         double warm_ub) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Index> bins;
    for (Index v = 0; v < m.num_vars(); ++v)
        if (m.is_binary(v)) bins.push_back(v);
    ConicModel work = relax(m);

    // node relaxations only need enough accuracy to dominate the gap tolerance
    IpmOptions node_opts;
    node_opts.feastol = node_opts.abstol = node_opts.reltol =
        std::min(1e-6, 0.01 * cfg.rel_gap_tol);

    SolveReport rep;
    rep.ub = warm_ub;
    Vec best;
    double global_lb = -kInf;
    bool hit_limit = false;

    // diving heuristic: saturate the largest fractional binary until the
    // relaxation turns integral; any integral point is a valid incumbent
    if (!bins.empty()) {
        std::vector<Index> touched;
        std::vector<Index> dive_path;
        int backoffs = 3;
        for (std::size_t guard = 0; guard < 2 * bins.size() + 10; ++guard) {
            RelaxSolution rs = solve_relaxation(work, node_opts);
            if (rs.status != SolveStatus::Optimal) {
                if (dive_path.empty() || --backoffs < 0) break;
                work.set_bounds(dive_path.back(), 0.0, 0.0);
                dive_path.pop_back();
                continue;
            }
            Index pick = -1;
            double px = 0.0;
            for (Index v : bins) {
                const double x = rs.x[v];
                if (std::abs(x - std::round(x)) > cfg.integrality_tol && x > px) {
                    px = x;
                    pick = v;
                }
            }
            if (pick < 0) {
                RelaxSolution tight = solve_relaxation(work);
                if (tight.status == SolveStatus::Optimal && tight.objective < rep.ub) {
                    rep.ub = tight.objective;
                    best = tight.x;
                } else if (tight.status != SolveStatus::Optimal && rs.objective < rep.ub) {
                    rep.ub = rs.objective;
                    best = rs.x;
                }
                break;
            }
            work.set_bounds(pick, 1.0, 1.0);
            touched.push_back(pick);
            dive_path.push_back(pick);
            if (elapsed_s(t0) > 0.3 * cfg.time_limit_s) break;
        }
        for (Index v : touched) work.set_bounds(v, 0.0, 1.0);
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long next_id = 0;
    open.push({-kInf, next_id++, {}});

    auto prune_level = [&]() {
        return rep.ub - cfg.rel_gap_tol * std::max(std::abs(rep.ub), 1e-12);
    };

    // pseudo-cost state: average lower-bound gain per unit of fractionality
    const bool use_pc = cfg.branching_rule == "pseudo_cost";
    std::vector<double> pc_gain[2] = {std::vector<double>(m.num_vars(), 0.0),
                                      std::vector<double>(m.num_vars(), 0.0)};
    std::vector<int> pc_count[2] = {std::vector<int>(m.num_vars(), 0),
                                    std::vector<int>(m.num_vars(), 0)};
    long sb_solves = 0;

    while (!open.empty()) {
        if (elapsed_s(t0) > cfg.time_limit_s || rep.nodes >= cfg.node_limit) {
            hit_limit = true;
            break;
        }
        Node nd = open.top();
        open.pop();
        if (nd.lb > -kInf) global_lb = std::max(global_lb, nd.lb);
        if (nd.lb >= prune_level()) continue;

        for (const auto& [v, val] : nd.fix) work.set_bounds(v, val, val);
        RelaxSolution rs = solve_relaxation(work, node_opts);
        ++rep.nodes;

        if (rs.status == SolveStatus::Infeasible) {
            for (const auto& [v, val] : nd.fix) work.set_bounds(v, 0.0, 1.0);
            continue;
        }
        if (rs.status == SolveStatus::NumericalTrouble) {
            for (const auto& [v, val] : nd.fix) work.set_bounds(v, 0.0, 1.0);
            if (nd.fix.size() == bins.size()) continue;  // fully fixed leaf, give up on it
            std::set<Index> fixed;
            for (const auto& [v, val] : nd.fix) fixed.insert(v);
            for (Index v : bins)
                if (!fixed.count(v)) {
                    for (double val : {0.0, 1.0}) {
                        Node ch = nd;
                        ch.id = next_id++;
                        ch.fix.emplace_back(v, val);
                        open.push(std::move(ch));
                    }
                    break;
                }
            continue;
        }

        const double lb = rs.objective;
        if (lb >= prune_level()) {
            for (const auto& [v, val] : nd.fix) work.set_bounds(v, 0.0, 1.0);
            continue;
        }

        // candidate fractional binaries with their fractionality
        std::vector<std::pair<double, Index>> cand;
        for (Index v : bins) {
            const double x = rs.x[v];
            const double frac = std::min(x, 1.0 - x);
            if (std::abs(x - std::round(x)) > cfg.integrality_tol) cand.push_back({frac, v});
        }
        if (cand.empty()) {
            // integral: re-solve at full accuracy before accepting the incumbent
            RelaxSolution tight = solve_relaxation(work);
            for (const auto& [v, val] : nd.fix) work.set_bounds(v, 0.0, 1.0);
            if (tight.status == SolveStatus::Optimal && tight.objective < rep.ub) {
                rep.ub = tight.objective;
                best = tight.x;
            } else if (tight.status != SolveStatus::Optimal && lb < rep.ub) {
                rep.ub = lb;
                best = rs.x;
            }
            continue;
        }

        Index branch_var = -1;
        double child_lb[2] = {lb, lb};
        bool have_child_lb = false;
        if (!use_pc) {
            // most fractional, ties broken by lowest index
            double best_score = kInf;
            for (const auto& [frac, v] : cand) {
                const double score = std::abs(rs.x[v] - 0.5);
                if (score < best_score) {
                    best_score = score;
                    branch_var = v;
                }
            }
        } else {
            // initialize unreliable candidates by strong branching
            std::sort(cand.begin(), cand.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            int budget = sb_solves < 400 ? 2 : 0;
            for (const auto& [frac, v] : cand) {
                if (budget == 0) break;
                if (pc_count[0][v] > 0 && pc_count[1][v] > 0) continue;
                --budget;
                for (int dir = 0; dir < 2; ++dir) {
                    work.set_bounds(v, dir, dir);
                    RelaxSolution sb = solve_relaxation(work, node_opts);
                    work.set_bounds(v, 0.0, 1.0);
                    ++sb_solves;
                    const double width = dir == 0 ? rs.x[v] : 1.0 - rs.x[v];
                    double gain;
                    if (sb.status == SolveStatus::Optimal)
                        gain = std::max(0.0, sb.objective - lb) / std::max(width, 1e-4);
                    else if (sb.status == SolveStatus::Infeasible)
                        gain = 10.0 * std::max(1.0, std::abs(lb));
                    else
                        continue;
                    pc_gain[dir][v] += gain;
                    ++pc_count[dir][v];
                }
            }
            // product rule over estimated child gains
            double best_score = -1.0;
            for (const auto& [frac, v] : cand) {
                auto avg = [&](int dir) {
                    return pc_count[dir][v] > 0 ? pc_gain[dir][v] / pc_count[dir][v] : 1e-6;
                };
                const double dn = avg(0) * rs.x[v], up = avg(1) * (1.0 - rs.x[v]);
                const double score = std::max(dn, 1e-12) * std::max(up, 1e-12);
                if (score > best_score) {
                    best_score = score;
                    branch_var = v;
                }
            }
            // reuse the strong-branching bounds for the chosen children
            if (pc_count[0][branch_var] + pc_count[1][branch_var] > 0 &&
                sb_solves <= 2 * rep.nodes + 400) {
                for (int dir = 0; dir < 2; ++dir) {
                    work.set_bounds(branch_var, dir, dir);
                    RelaxSolution sb = solve_relaxation(work, node_opts);
                    work.set_bounds(branch_var, 0.0, 1.0);
                    ++sb_solves;
                    if (sb.status == SolveStatus::Optimal)
                        child_lb[dir] = std::max(
                            lb, sb.objective - 1e-5 * std::max(1.0, std::abs(sb.objective)));
                    else if (sb.status == SolveStatus::Infeasible)
                        child_lb[dir] = kInf;
                }
                have_child_lb = true;
            }
        }
        for (const auto& [v, val] : nd.fix) work.set_bounds(v, 0.0, 1.0);

        for (int dir = 0; dir < 2; ++dir) {
            if (have_child_lb && child_lb[dir] >= prune_level()) continue;
            Node ch = nd;
            ch.lb = child_lb[dir];
            ch.id = next_id++;
            ch.fix.emplace_back(branch_var, static_cast<double>(dir));
            open.push(std::move(ch));
        }
    }

    rep.wall_time_s = elapsed_s(t0);
    if (rep.ub < kInf) {
        if (hit_limit) {
            rep.lb = global_lb;
            while (!open.empty()) {  // tighten with the best open bound
                rep.lb = std::max(rep.lb, std::min(rep.ub, open.top().lb));
                break;
            }
            rep.status = MisocpStatus::TimeLimit;
        } else {
            rep.lb = std::max(global_lb, prune_level());
            rep.status = MisocpStatus::Optimal;
        }
        rep.lb = std::min(rep.lb, rep.ub);
        rep.gap_pct = 100.0 * (rep.ub - rep.lb) / std::max(std::abs(rep.ub), 1e-12);
    } else {
        rep.status = hit_limit ? MisocpStatus::TimeLimit : MisocpStatus::Infeasible;
        rep.lb = hit_limit ? global_lb : kInf;
        rep.gap_pct = 100.0;
    }
    return {rep, best};
}

FixedPathResult fixed_route_eval(const Subdivision& sub, const AdjacencyGraph& graph,
                                 const std::vector<int>& path, const Vec& a, const Vec& b) {
    if (path.empty()) throw Error("InvalidPath", "empty region sequence");
    std::set<int> seen;
    for (int r : path) {
        if (r < 0 || r >= sub.size()) throw Error("InvalidPath", "region index out of range");
        if (!seen.insert(r).second) throw Error("InvalidPath", "region repeated");
    }
    const int K = static_cast<int>(path.size()) - 1;
    if (K == 0) {
        FixedPathResult res;
        res.value = sub.regions[path[0]].weight * lp_norm(b - a, sub.regions[path[0]].p);
        return res;
    }
    const int dim = sub.dim;
    ConicModel m;
    std::vector<std::vector<Index>> lam(K);
    std::vector<const Polytope*> faces(K);
    for (int k = 0; k < K; ++k) {
        const int e = graph.edge_index(path[k], path[k + 1]);
        if (e < 0) throw Error("InvalidPath", "consecutive regions are not adjacent");
        faces[k] = &graph.edges[e].face;
        LinExpr conv(-1.0);
        for (int j = 0; j < static_cast<int>(faces[k]->vertices.size()); ++j) {
            lam[k].push_back(m.add_nonneg("lam[" + std::to_string(k) + "]"));
            conv.add(lam[k].back(), 1.0);
        }
        m.add_eq(conv);
    }
    LinExpr obj;
    for (int j = 0; j <= K; ++j) {
        const Region& r = sub.regions[path[j]];
        std::vector<LinExpr> diff(dim);
        for (int k = 0; k < dim; ++k) {
            if (j < K)
                for (int v = 0; v < static_cast<int>(faces[j]->vertices.size()); ++v)
                    diff[k].add(lam[j][v], faces[j]->vertices[v][k]);
            else
                diff[k].constant += b[k];
            if (j > 0)
                for (int v = 0; v < static_cast<int>(faces[j - 1]->vertices.size()); ++v)
                    diff[k].add(lam[j - 1][v], -faces[j - 1]->vertices[v][k]);
            else
                diff[k].constant -= a[k];
        }
        Index d = m.add_nonneg("d[" + std::to_string(j) + "]");
        add_norm_epigraph(m, r.p, diff, LinExpr::var(d));
        obj.add(d, r.weight);
    }
    m.set_objective(obj);
    RelaxSolution rs = solve_relaxation(m);
    if (rs.status != SolveStatus::Optimal)
        throw Error("NumericalTrouble", "fixed-path subproblem did not solve");
    FixedPathResult res;
    res.value = rs.objective;
    for (int k = 0; k < K; ++k) {
        Vec y = Vec::Zero(dim);
        for (int v = 0; v < static_cast<int>(faces[k]->vertices.size()); ++v)
            y += rs.x[lam[k][v]] * faces[k]->vertices[v];
        res.gates.push_back(std::move(y));
    }
    return res;
}

FixedPathResult fixed_path_eval(const SppInstance& inst, const std::vector<int>& path) {
    if (path.empty() || path.front() != inst.s || path.back() != inst.t)
        throw Error("InvalidPath", "sequence must run from the source to the target region");
    return fixed_route_eval(inst.sub, inst.graph, path, inst.source, inst.target);
}

BruteForceResult brute_force_spp(const SppInstance& inst, long max_paths) {
    if (inst.s == inst.t) {
        BruteForceResult res;
        res.value = spp_trivial_value(inst);
        res.path = {inst.s};
        return res;
    }
    BruteForceResult res;
    long count = 0;
    std::vector<int> cur{inst.s};
    std::vector<bool> used(inst.sub.size(), false);
    used[inst.s] = true;
    std::function<void(int)> dfs = [&](int i) {
        if (i == inst.t) {
            if (++count > max_paths) throw Error("TooManyPaths", "path enumeration aborted");
            FixedPathResult f = fixed_path_eval(inst, cur);
            if (f.value < res.value) {
                res.value = f.value;
                res.path = cur;
                res.gates = f.gates;
            }
            return;
        }
        for (const auto& [j, e] : inst.graph.adj[i]) {
            if (used[j]) continue;
            used[j] = true;
            cur.push_back(j);
            dfs(j);
            cur.pop_back();
            used[j] = false;
        }
    };
    dfs(inst.s);
    if (res.path.empty()) throw Error("DisconnectedGraph", "no simple path found");
    return res;
}

SppResult solve_spp(const SppInstance& inst, bool use_f2, const SolveConfig& cfg) {
    SppResult out;
    if (inst.s == inst.t) {
        const double v = spp_trivial_value(inst);
        out.report.status = MisocpStatus::Optimal;
        out.report.ub = out.report.lb = v;
        out.report.gap_pct = 0.0;
        out.sol.value = v;
        out.sol.path = {inst.s};
        return out;
    }
    BuiltModel bm = use_f2 ? build_spp_f2(inst) : build_spp_f1(inst);

    double warm = kInf;
    PathSolution warm_sol;
    if (inst.sub.dim == 2) {
        try {
            SegmentPath sp = segment_induced_path(inst.sub, inst.source, inst.target);
            if (sp.regions.front() == inst.s && sp.regions.back() == inst.t) {
                FixedPathResult f = fixed_path_eval(inst, sp.regions);
                warm = f.value;
                warm_sol.value = f.value;
                warm_sol.path = sp.regions;
                warm_sol.gates = f.gates;
            }
        } catch (const Error&) {
            // heuristic is optional; fall through without a warm start
        }
    }

    auto [rep, x] = solve_misocp(bm.model, cfg, warm);
    out.report = rep;
    if (x.size() > 0)
        out.sol = decode_spp(inst, bm.atlas, x, rep.ub);
    else if (rep.ub < kInf)
        out.sol = warm_sol;  // the heuristic incumbent was never improved
    return out;
}

Vec euclidean_weber_point(const WeberInstance& inst) {
    const int dim = inst.sub.dim;
    ConicModel m;
    std::vector<Index> x;
    for (int k = 0; k < dim; ++k) x.push_back(m.add_var("x[" + std::to_string(k) + "]"));
    LinExpr obj;
    for (const auto& dm : inst.demands) {
        std::vector<LinExpr> diff(dim);
        for (int k = 0; k < dim; ++k) {
            diff[k].add(x[k], 1.0);
            diff[k].constant -= dm.point[k];
        }
        Index d = m.add_nonneg("d");
        add_norm_epigraph(m, PNorm::two(), diff, LinExpr::var(d));
        obj.add(d, 1.0);
    }
    m.set_objective(obj);
    RelaxSolution rs = solve_relaxation(m);
    if (rs.status != SolveStatus::Optimal)
        throw Error("NumericalTrouble", "euclidean median subproblem did not solve");
    Vec w(dim);
    for (int k = 0; k < dim; ++k) w[k] = rs.x[x[k]];
    return w;
}

double weber_route_bound(const WeberInstance& inst, const Vec& x, WeberSolution* sol) {
    const int fr = locate_point(inst.sub, x);
    double total = 0.0;
    WeberSolution ws;
    ws.facility_region = fr;
    ws.facility = x;
    for (int l = 0; l < static_cast<int>(inst.demands.size()); ++l) {
        std::vector<int> path;
        if (inst.demand_region[l] == fr) {
            path = {fr};
        } else {
            SegmentPath sp = segment_induced_path(inst.sub, inst.demands[l].point, x);
            path = sp.regions;
            if (path.front() != inst.demand_region[l] || path.back() != fr)
                throw Error("InvalidPath", "segment path misses a terminal region");
        }
        FixedPathResult f =
            fixed_route_eval(inst.sub, inst.graph, path, inst.demands[l].point, x);
        total += inst.demands[l].weight * f.value;
        PathSolution route;
        route.value = f.value;
        route.path = std::move(path);
        route.gates = std::move(f.gates);
        ws.routes.push_back(std::move(route));
    }
    ws.value = total;
    if (sol) *sol = std::move(ws);
    return total;
}

LocpResult solve_locp(const WeberInstance& inst, bool use_f2, const SolveConfig& cfg) {
    BuiltModel bm = use_f2 ? build_locp_f2(inst) : build_locp_f1(inst);

    double warm = kInf;
    WeberSolution warm_sol;
    if (inst.sub.dim == 2) {
        try {
            warm = weber_route_bound(inst, euclidean_weber_point(inst), &warm_sol);
        } catch (const Error&) {
        }
    }

    auto [rep, x] = solve_misocp(bm.model, cfg, warm);
    LocpResult out;
    out.report = rep;
    if (x.size() > 0)
        out.sol = decode_locp(inst, bm.atlas, x, rep.ub);
    else if (rep.ub < kInf)
        out.sol = warm_sol;
    return out;
}

}  // namespace wrp
