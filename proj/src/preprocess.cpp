#include "wrp/preprocess.hpp"

#include "wrp/norms.hpp"

#include <algorithm>
#include <numeric>

namespace wrp {

namespace {

// min over x in P of sum_k |t_k - x|_2 via one small conic program; x is a
// convex combination of Ext(P).
double hull_detour(const Polytope& P, const std::vector<Vec>& terminals) {
    const int dim = P.dim;
    ConicModel m;
    std::vector<Index> lam;
    LinExpr conv(-1.0);
    for (std::size_t e = 0; e < P.vertices.size(); ++e) {
        lam.push_back(m.add_nonneg("lam"));
        conv.add(lam.back(), 1.0);
    }
    m.add_eq(conv);
    LinExpr obj;
    for (const Vec& t : terminals) {
        std::vector<LinExpr> diff(dim);
        for (int k = 0; k < dim; ++k) {
            for (std::size_t e = 0; e < P.vertices.size(); ++e)
                diff[k].add(lam[e], P.vertices[e][k]);
            diff[k].constant -= t[k];
        }
        Index d = m.add_nonneg("d");
        add_norm_epigraph(m, PNorm::two(), diff, LinExpr::var(d));
        obj.add(d, 1.0);
    }
    m.set_objective(obj);
    RelaxSolution rs = solve_relaxation(m);
    if (rs.status != SolveStatus::Optimal)
        throw Error("NumericalTrouble", "detour ranking subproblem did not solve");
    return rs.objective;
}

std::vector<int> rank_descending(const std::vector<double>& score) {
    std::vector<int> order(score.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return score[a] > score[b]; });
    return order;
}

}  // namespace

EliminationList preprocess_spp(const SppInstance& inst, int m_star) {
    EliminationList out;
    if (inst.s == inst.t) {
        out.upper_bound = spp_trivial_value(inst);
        return out;  // nothing to force: the optimal path stays in one region
    }
    SegmentPath sp = segment_induced_path(inst.sub, inst.source, inst.target);
    out.upper_bound = fixed_path_eval(inst, sp.regions).value;

    std::vector<double> score(inst.sub.size());
    for (int i = 0; i < inst.sub.size(); ++i)
        score[i] = hull_detour(inst.sub.regions[i].polytope, {inst.source, inst.target});
    std::vector<int> order = rank_descending(score);

    BuiltModel bm = build_spp_f2(inst);
    const PathVars& pv = bm.atlas.flows[0];
    m_star = std::min<int>(m_star, inst.sub.size());
    for (int r = 0; r < m_star; ++r) {
        const int i = order[r];
        ConicModel forced = relax(bm.model);
        LinExpr visit;
        for (std::size_t a = 0; a < inst.arcs.size(); ++a)
            if (inst.arcs[a].to == i) visit.add(pv.z[a], 1.0);
        if (i != inst.s) visit.constant -= 1.0;  // the source is visited for free
        forced.add_eq(visit, "force_visit");
        RelaxSolution rs = solve_relaxation(forced);
        if (rs.status != SolveStatus::Optimal) continue;  // never eliminate on failure
        out.processed.push_back(i);
        out.bounds.push_back(rs.objective);
        // the margin must dominate the relaxation engine's accuracy
        if (rs.objective > out.upper_bound + 1e-6 * std::max(1.0, std::abs(out.upper_bound)))
            out.eliminated.push_back(i);
    }
    std::sort(out.eliminated.begin(), out.eliminated.end());
    return out;
}

EliminationList preprocess_locp(const WeberInstance& inst, int m_star) {
    EliminationList out;
    Vec median = euclidean_weber_point(inst);
    out.upper_bound = weber_route_bound(inst, median);

    std::vector<Vec> pts;
    for (const auto& d : inst.demands) pts.push_back(d.point);
    std::vector<double> score(inst.sub.size());
    for (int i = 0; i < inst.sub.size(); ++i)
        score[i] = hull_detour(inst.sub.regions[i].polytope, pts);
    std::vector<int> order = rank_descending(score);

    BuiltModel bm = build_locp_f2(inst);
    m_star = std::min<int>(m_star, inst.sub.size());
    for (int r = 0; r < m_star; ++r) {
        const int i = order[r];
        ConicModel forced = relax(bm.model);
        forced.set_bounds(bm.atlas.u[i], 1.0, 1.0);
        RelaxSolution rs = solve_relaxation(forced);
        if (rs.status != SolveStatus::Optimal) continue;
        out.processed.push_back(i);
        out.bounds.push_back(rs.objective);
        if (rs.objective > out.upper_bound + 1e-6 * std::max(1.0, std::abs(out.upper_bound)))
            out.eliminated.push_back(i);
    }
    std::sort(out.eliminated.begin(), out.eliminated.end());
    return out;
}

ShrunkSpp shrink_spp(const SppInstance& inst, const std::vector<int>& eliminated) {
    std::vector<bool> drop(inst.sub.size(), false);
    for (int i : eliminated) drop[i] = true;
    ShrunkSpp out;
    std::vector<Region> kept;
    for (int i = 0; i < inst.sub.size(); ++i)
        if (!drop[i]) {
            out.keep.push_back(i);
            kept.push_back(inst.sub.regions[i]);
        }
    out.inst = make_spp_instance(make_subdivision(inst.sub.dim, std::move(kept)),
                                 inst.source, inst.target);
    return out;
}

void apply_eliminations(ConicModel& m, const VariableAtlas& atlas,
                        const std::vector<Arc>& arcs, const std::vector<int>& eliminated) {
    if (!atlas.u.empty()) {
        // facility placement was ruled out, but routes may still cross P_i
        for (int i : eliminated) m.set_bounds(atlas.u[i], 0.0, 0.0);
        return;
    }
    std::vector<bool> off(atlas.flows.empty() ? 0 : atlas.flows[0].d.size(), false);
    for (int i : eliminated) off[i] = true;
    for (const auto& pv : atlas.flows)
        for (std::size_t a = 0; a < arcs.size(); ++a)
            if (off[arcs[a].from] || off[arcs[a].to]) m.set_bounds(pv.z[a], 0.0, 0.0);
}

}  // namespace wrp
