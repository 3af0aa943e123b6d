#include "wrp/formulations.hpp"

#include "wrp/norms.hpp"

#include <queue>
#include <string>
#include <utility>

namespace wrp {

namespace {

std::string idx2(int i, int j) {
    return std::to_string(i) + "," + std::to_string(j);
}

std::vector<bool> reachable_from(const AdjacencyGraph& g, int s) {
    std::vector<bool> seen(g.m, false);
    std::queue<int> q;
    seen[s] = true;
    q.push(s);
    while (!q.empty()) {
        int i = q.front();
        q.pop();
        for (const auto& [j, e] : g.adj[i])
            if (!seen[j]) {
                seen[j] = true;
                q.push(j);
            }
    }
    return seen;
}

// In- and out-arc lists per region, indices into the arc table.
struct ArcLists {
    std::vector<std::vector<int>> in, out;
};

ArcLists arc_lists(int nreg, const std::vector<Arc>& arcs) {
    ArcLists al;
    al.in.resize(nreg);
    al.out.resize(nreg);
    for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
        al.out[arcs[a].from].push_back(a);
        al.in[arcs[a].to].push_back(a);
    }
    return al;
}

const Polytope& arc_face(const Subdivision&, const AdjacencyGraph& g,
                         const std::vector<Arc>& arcs, int a) {
    return g.edges[arcs[a].edge].face;
}

// z binary per arc, lambda per arc per face vertex, d per region; the tag
// distinguishes the per-demand copies of the location problem.
PathVars make_flow_vars(ConicModel& m, const Subdivision& sub, const AdjacencyGraph& g,
                        const std::vector<Arc>& arcs, const std::string& tag) {
    PathVars pv;
    pv.z.resize(arcs.size());
    pv.lambda.resize(arcs.size());
    for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
        const std::string ij = idx2(arcs[a].from, arcs[a].to);
        pv.z[a] = m.add_binary("z" + tag + "[" + ij + "]");
        const Polytope& F = arc_face(sub, g, arcs, a);
        for (int e = 0; e < static_cast<int>(F.vertices.size()); ++e)
            pv.lambda[a].push_back(
                m.add_nonneg("lam" + tag + "[" + ij + "," + std::to_string(e) + "]"));
    }
    for (int i = 0; i < sub.size(); ++i)
        pv.d.push_back(m.add_nonneg("d" + tag + "[" + std::to_string(i) + "]"));
    pv.pairs.resize(sub.size());
    pv.arrivals.resize(sub.size());
    return pv;
}

// Sum of gate-point coordinates sum_e lambda_e * e_k over the given arcs.
void add_gate_terms(LinExpr& expr, const Subdivision& sub, const AdjacencyGraph& g,
                    const std::vector<Arc>& arcs, const PathVars& pv,
                    const std::vector<int>& alist, int k, double sign) {
    for (int a : alist) {
        const Polytope& F = arc_face(sub, g, arcs, a);
        for (int e = 0; e < static_cast<int>(F.vertices.size()); ++e)
            expr.add(pv.lambda[a][e], sign * F.vertices[e][k]);
    }
}

// Degree caps and gate coupling shared by every formulation; cap_shift is
// empty for SPP and u_{s_l} for LocP (caps read sum z <= 1 - u_{s_l}).
void add_degree_and_coupling(ConicModel& m, const Subdivision& sub, const AdjacencyGraph& g,
                             const std::vector<Arc>& arcs, const PathVars& pv,
                             const ArcLists& al, const LinExpr& cap_shift,
                             const std::string& tag) {
    for (int i = 0; i < sub.size(); ++i) {
        LinExpr in_cap = cap_shift, out_cap = cap_shift;
        in_cap.constant -= 1.0;
        out_cap.constant -= 1.0;
        for (int a : al.in[i]) in_cap.add(pv.z[a], 1.0);
        for (int a : al.out[i]) out_cap.add(pv.z[a], 1.0);
        m.add_le(in_cap, "cap_in" + tag + "[" + std::to_string(i) + "]");
        m.add_le(out_cap, "cap_out" + tag + "[" + std::to_string(i) + "]");
    }
    for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
        LinExpr couple;
        for (Index v : pv.lambda[a]) couple.add(v, 1.0);
        couple.add(pv.z[a], -1.0);
        m.add_eq(couple, "gate" + tag + "[" + idx2(arcs[a].from, arcs[a].to) + "]");
    }
}

// Product-splitting block at an intermediate region: rho/phi/psi variables,
// their linking rows, and one norm term per arc pair accumulated into dsum.
// extra_in_row(a) lets LocP-F2 splice the Theta/Upsilon terms into the rows
// that would otherwise read sum_j rho = z_hi and sum_j phi = lambda_hie.
void add_pair_block(ConicModel& m, const Subdivision& sub, const AdjacencyGraph& g,
                    const std::vector<Arc>& arcs, PathVars& pv, const ArcLists& al, int i,
                    LinExpr& dsum, const std::string& tag) {
    const PNorm& p = sub.regions[i].p;
    const int dim = sub.dim;
    auto& pairs = pv.pairs[i];
    for (int a : al.in[i])
        for (int b : al.out[i]) {
            PairVars pr;
            pr.in_arc = a;
            pr.out_arc = b;
            const std::string hij =
                idx2(arcs[a].from, i) + "," + std::to_string(arcs[b].to);
            pr.rho = m.add_nonneg("rho" + tag + "[" + hij + "]");
            const Polytope& Fin = arc_face(sub, g, arcs, a);
            const Polytope& Fout = arc_face(sub, g, arcs, b);
            for (int e = 0; e < static_cast<int>(Fin.vertices.size()); ++e)
                pr.phi.push_back(
                    m.add_nonneg("phi" + tag + "[" + hij + "," + std::to_string(e) + "]"));
            for (int e = 0; e < static_cast<int>(Fout.vertices.size()); ++e)
                pr.psi.push_back(
                    m.add_nonneg("psi" + tag + "[" + hij + "," + std::to_string(e) + "]"));

            LinExpr phi_sum, psi_sum;
            for (Index v : pr.phi) phi_sum.add(v, 1.0);
            for (Index v : pr.psi) psi_sum.add(v, 1.0);
            phi_sum.add(pr.rho, -1.0);
            psi_sum.add(pr.rho, -1.0);
            m.add_eq(phi_sum, "phi_rho" + tag + "[" + hij + "]");
            m.add_eq(psi_sum, "psi_rho" + tag + "[" + hij + "]");

            std::vector<LinExpr> diff(dim);
            for (int k = 0; k < dim; ++k) {
                for (int e = 0; e < static_cast<int>(Fout.vertices.size()); ++e)
                    diff[k].add(pr.psi[e], Fout.vertices[e][k]);
                for (int e = 0; e < static_cast<int>(Fin.vertices.size()); ++e)
                    diff[k].add(pr.phi[e], -Fin.vertices[e][k]);
            }
            Index seg = m.add_nonneg("seg" + tag + "[" + hij + "]");
            add_norm_epigraph(m, p, diff, LinExpr::var(seg), "seg" + tag + "[" + hij + "]");
            dsum.add(seg, 1.0);
            pairs.push_back(std::move(pr));
        }
}

AdjacencyGraph assemble_graph(int m, std::vector<GraphEdge> edges) {
    AdjacencyGraph g;
    g.m = m;
    g.edges = std::move(edges);
    g.adj.assign(m, {});
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        g.adj[g.edges[e].i].emplace_back(g.edges[e].j, e);
        g.adj[g.edges[e].j].emplace_back(g.edges[e].i, e);
    }
    return g;
}

void check_spp(const SppInstance& inst) {
    if (inst.s == inst.t)
        throw Error("SameRegion", "terminals share a region; use spp_trivial_value");
    if (!reachable_from(inst.graph, inst.s)[inst.t])
        throw Error("DisconnectedGraph", "no path between the terminal regions");
}

}  // namespace

double spp_trivial_value(const SppInstance& inst) {
    const Region& r = inst.sub.regions[inst.s];
    return r.weight * lp_norm(inst.target - inst.source, r.p);
}

BuiltModel build_spp_f1(const SppInstance& inst) {
    check_spp(inst);
    const Subdivision& sub = inst.sub;
    const int dim = sub.dim;
    BuiltModel bm;
    ConicModel& m = bm.model;
    PathVars pv = make_flow_vars(m, sub, inst.graph, inst.arcs, "");
    ArcLists al = arc_lists(sub.size(), inst.arcs);

    for (int i = 0; i < sub.size(); ++i) {
        LinExpr flow;
        for (int a : al.out[i]) flow.add(pv.z[a], 1.0);
        for (int a : al.in[i]) flow.add(pv.z[a], -1.0);
        if (i == inst.s)
            flow.constant -= 1.0;
        else if (i == inst.t)
            flow.constant += 1.0;
        m.add_eq(flow, "flow[" + std::to_string(i) + "]");
    }
    add_degree_and_coupling(m, sub, inst.graph, inst.arcs, pv, al, LinExpr(), "");

    LinExpr obj;
    for (int i = 0; i < sub.size(); ++i) {
        std::vector<LinExpr> diff(dim);
        for (int k = 0; k < dim; ++k) {
            if (i == inst.t) {
                diff[k].constant = inst.target[k];
                add_gate_terms(diff[k], sub, inst.graph, inst.arcs, pv, al.in[i], k, -1.0);
            } else {
                add_gate_terms(diff[k], sub, inst.graph, inst.arcs, pv, al.out[i], k, 1.0);
                if (i == inst.s)
                    diff[k].constant = -inst.source[k];
                else
                    add_gate_terms(diff[k], sub, inst.graph, inst.arcs, pv, al.in[i], k, -1.0);
            }
        }
        add_norm_epigraph(m, sub.regions[i].p, diff, LinExpr::var(pv.d[i]),
                          "dist[" + std::to_string(i) + "]");
        obj.add(pv.d[i], sub.regions[i].weight);
    }
    m.set_objective(obj);
    bm.atlas.flows.push_back(std::move(pv));
    return bm;
}

BuiltModel build_spp_f2(const SppInstance& inst) {
    check_spp(inst);
    const Subdivision& sub = inst.sub;
    const int dim = sub.dim;
    BuiltModel bm;
    ConicModel& m = bm.model;
    PathVars pv = make_flow_vars(m, sub, inst.graph, inst.arcs, "");
    ArcLists al = arc_lists(sub.size(), inst.arcs);

    for (int i = 0; i < sub.size(); ++i) {
        LinExpr flow;
        for (int a : al.out[i]) flow.add(pv.z[a], 1.0);
        for (int a : al.in[i]) flow.add(pv.z[a], -1.0);
        if (i == inst.s)
            flow.constant -= 1.0;
        else if (i == inst.t)
            flow.constant += 1.0;
        m.add_eq(flow, "flow[" + std::to_string(i) + "]");
    }
    add_degree_and_coupling(m, sub, inst.graph, inst.arcs, pv, al, LinExpr(), "");

    LinExpr obj;
    for (int i = 0; i < sub.size(); ++i) {
        const PNorm& p = sub.regions[i].p;
        LinExpr dsum;
        if (i == inst.s || i == inst.t) {
            // one norm term per terminal arc, with the terminal point scaled
            // by the arc selector
            const bool at_s = (i == inst.s);
            const Vec& x = at_s ? inst.source : inst.target;
            for (int a : (at_s ? al.out[i] : al.in[i])) {
                const Polytope& F = arc_face(sub, inst.graph, inst.arcs, a);
                std::vector<LinExpr> diff(dim);
                for (int k = 0; k < dim; ++k) {
                    for (int e = 0; e < static_cast<int>(F.vertices.size()); ++e)
                        diff[k].add(pv.lambda[a][e], F.vertices[e][k]);
                    diff[k].add(pv.z[a], -x[k]);
                }
                const std::string ij = idx2(inst.arcs[a].from, inst.arcs[a].to);
                Index seg = m.add_nonneg("seg[" + ij + "]");
                add_norm_epigraph(m, p, diff, LinExpr::var(seg), "seg[" + ij + "]");
                dsum.add(seg, 1.0);
            }
        } else {
            add_pair_block(m, sub, inst.graph, inst.arcs, pv, al, i, dsum, "");
            // linking rows tying rho to the arc selectors and phi/psi to the
            // gate scalars
            for (int a : al.in[i]) {
                LinExpr row;
                for (const auto& pr : pv.pairs[i])
                    if (pr.in_arc == a) row.add(pr.rho, 1.0);
                row.add(pv.z[a], -1.0);
                m.add_eq(row, "rho_in[" + idx2(inst.arcs[a].from, i) + "]");
                const int ne = static_cast<int>(pv.lambda[a].size());
                for (int e = 0; e < ne; ++e) {
                    LinExpr split;
                    for (const auto& pr : pv.pairs[i])
                        if (pr.in_arc == a) split.add(pr.phi[e], 1.0);
                    split.add(pv.lambda[a][e], -1.0);
                    m.add_eq(split, "phi_lam[" + idx2(inst.arcs[a].from, i) + "," +
                                        std::to_string(e) + "]");
                }
            }
            for (int b : al.out[i]) {
                LinExpr row;
                for (const auto& pr : pv.pairs[i])
                    if (pr.out_arc == b) row.add(pr.rho, 1.0);
                row.add(pv.z[b], -1.0);
                m.add_eq(row, "rho_out[" + idx2(i, inst.arcs[b].to) + "]");
                const int ne = static_cast<int>(pv.lambda[b].size());
                for (int e = 0; e < ne; ++e) {
                    LinExpr split;
                    for (const auto& pr : pv.pairs[i])
                        if (pr.out_arc == b) split.add(pr.psi[e], 1.0);
                    split.add(pv.lambda[b][e], -1.0);
                    m.add_eq(split, "psi_lam[" + idx2(i, inst.arcs[b].to) + "," +
                                        std::to_string(e) + "]");
                }
            }
        }
        if (!dsum.terms.empty()) {
            dsum.add(pv.d[i], -1.0);
            m.add_le(dsum, "dsum[" + std::to_string(i) + "]");
        }
        obj.add(pv.d[i], sub.regions[i].weight);
    }
    m.set_objective(obj);
    bm.atlas.flows.push_back(std::move(pv));
    return bm;
}

namespace {

void check_locp(const WeberInstance& inst) {
    const auto seen = reachable_from(inst.graph, 0);
    for (int i = 0; i < inst.sub.size(); ++i)
        if (!seen[i]) throw Error("DisconnectedGraph", "subdivision graph is disconnected");
}

// Facility variables shared by all demands: selector u_i and the convex
// combination mu_ie of Ext(P_i).
void add_facility_vars(ConicModel& m, const Subdivision& sub, VariableAtlas& atlas) {
    LinExpr pick;
    for (int i = 0; i < sub.size(); ++i) {
        atlas.u.push_back(m.add_binary("u[" + std::to_string(i) + "]"));
        pick.add(atlas.u[i], 1.0);
        std::vector<Index> mu;
        const Polytope& P = sub.regions[i].polytope;
        LinExpr comb;
        for (int e = 0; e < static_cast<int>(P.vertices.size()); ++e) {
            mu.push_back(m.add_nonneg("mu[" + idx2(i, e) + "]"));
            comb.add(mu.back(), 1.0);
        }
        comb.add(atlas.u[i], -1.0);
        m.add_eq(comb, "mu_u[" + std::to_string(i) + "]");
        atlas.mu.push_back(std::move(mu));
    }
    pick.constant -= 1.0;
    m.add_eq(pick, "pick");
}

// Flow conservation with the facility as sink: RHS 1-u_{s_l} at the demand
// region and -u_i elsewhere.
void add_locp_flow(ConicModel& m, const Subdivision& sub, const PathVars& pv,
                   const ArcLists& al, const VariableAtlas& atlas, int sl,
                   const std::string& tag) {
    for (int i = 0; i < sub.size(); ++i) {
        LinExpr flow;
        for (int a : al.out[i]) flow.add(pv.z[a], 1.0);
        for (int a : al.in[i]) flow.add(pv.z[a], -1.0);
        if (i == sl) {
            flow.constant -= 1.0;
            flow.add(atlas.u[sl], 1.0);
        } else {
            flow.add(atlas.u[i], 1.0);
        }
        m.add_eq(flow, "flow" + tag + "[" + std::to_string(i) + "]");
    }
}

}  // namespace

BuiltModel build_locp_f1(const WeberInstance& inst) {
    check_locp(inst);
    const Subdivision& sub = inst.sub;
    const int dim = sub.dim;
    BuiltModel bm;
    ConicModel& m = bm.model;
    ArcLists al = arc_lists(sub.size(), inst.arcs);
    add_facility_vars(m, sub, bm.atlas);

    LinExpr obj;
    for (int l = 0; l < static_cast<int>(inst.demands.size()); ++l) {
        const std::string tag = "^" + std::to_string(l);
        const int sl = inst.demand_region[l];
        PathVars pv = make_flow_vars(m, sub, inst.graph, inst.arcs, tag);
        add_locp_flow(m, sub, pv, al, bm.atlas, sl, tag);
        add_degree_and_coupling(m, sub, inst.graph, inst.arcs, pv, al,
                                LinExpr::var(bm.atlas.u[sl]), tag);

        for (int i = 0; i < sub.size(); ++i) {
            std::vector<LinExpr> diff(dim);
            for (int k = 0; k < dim; ++k) {
                const Polytope& P = sub.regions[i].polytope;
                for (int e = 0; e < static_cast<int>(P.vertices.size()); ++e)
                    diff[k].add(bm.atlas.mu[i][e], P.vertices[e][k]);
                add_gate_terms(diff[k], sub, inst.graph, inst.arcs, pv, al.out[i], k, 1.0);
                if (i == sl)
                    diff[k].constant = -inst.demands[l].point[k];
                else
                    add_gate_terms(diff[k], sub, inst.graph, inst.arcs, pv, al.in[i], k, -1.0);
            }
            add_norm_epigraph(m, sub.regions[i].p, diff, LinExpr::var(pv.d[i]),
                              "dist" + tag + "[" + std::to_string(i) + "]");
            obj.add(pv.d[i], inst.demands[l].weight * sub.regions[i].weight);
        }
        bm.atlas.flows.push_back(std::move(pv));
    }
    m.set_objective(obj);
    return bm;
}

BuiltModel build_locp_f2(const WeberInstance& inst) {
    check_locp(inst);
    const Subdivision& sub = inst.sub;
    const int dim = sub.dim;
    BuiltModel bm;
    ConicModel& m = bm.model;
    ArcLists al = arc_lists(sub.size(), inst.arcs);
    add_facility_vars(m, sub, bm.atlas);

    LinExpr obj;
    for (int l = 0; l < static_cast<int>(inst.demands.size()); ++l) {
        const std::string tag = "^" + std::to_string(l);
        const int sl = inst.demand_region[l];
        const Vec& xl = inst.demands[l].point;
        PathVars pv = make_flow_vars(m, sub, inst.graph, inst.arcs, tag);
        add_locp_flow(m, sub, pv, al, bm.atlas, sl, tag);
        add_degree_and_coupling(m, sub, inst.graph, inst.arcs, pv, al,
                                LinExpr::var(bm.atlas.u[sl]), tag);

        for (int i = 0; i < sub.size(); ++i) {
            const PNorm& p = sub.regions[i].p;
            LinExpr dsum;
            if (i == sl) {
                // departure terms per outgoing arc plus the stay-at-home
                // facility term scaled by u_{s_l}
                for (int a : al.out[i]) {
                    const Polytope& F = arc_face(sub, inst.graph, inst.arcs, a);
                    std::vector<LinExpr> diff(dim);
                    for (int k = 0; k < dim; ++k) {
                        for (int e = 0; e < static_cast<int>(F.vertices.size()); ++e)
                            diff[k].add(pv.lambda[a][e], F.vertices[e][k]);
                        diff[k].add(pv.z[a], -xl[k]);
                    }
                    const std::string ij = idx2(inst.arcs[a].from, inst.arcs[a].to);
                    Index seg = m.add_nonneg("seg" + tag + "[" + ij + "]");
                    add_norm_epigraph(m, p, diff, LinExpr::var(seg), "seg" + tag);
                    dsum.add(seg, 1.0);
                }
                const Polytope& P = sub.regions[i].polytope;
                std::vector<LinExpr> diff(dim);
                for (int k = 0; k < dim; ++k) {
                    for (int e = 0; e < static_cast<int>(P.vertices.size()); ++e)
                        diff[k].add(bm.atlas.mu[i][e], P.vertices[e][k]);
                    diff[k].add(bm.atlas.u[i], -xl[k]);
                }
                Index home = m.add_nonneg("home" + tag);
                add_norm_epigraph(m, p, diff, LinExpr::var(home), "home" + tag);
                dsum.add(home, 1.0);
            } else {
                add_pair_block(m, sub, inst.graph, inst.arcs, pv, al, i, dsum, tag);

                // facility-arrival split per incoming arc: Theta carries the
                // facility point, Upsilon the entry gate
                LinExpr ups_total, theta_total;
                const Polytope& P = sub.regions[i].polytope;
                std::vector<LinExpr> theta_mu(P.vertices.size());
                for (int a : al.in[i]) {
                    FacilityArrival fa;
                    fa.in_arc = a;
                    const std::string hi = idx2(inst.arcs[a].from, i);
                    const Polytope& Fin = arc_face(sub, inst.graph, inst.arcs, a);
                    for (int e = 0; e < static_cast<int>(P.vertices.size()); ++e) {
                        fa.theta.push_back(m.add_nonneg("theta" + tag + "[" + hi + "," +
                                                        std::to_string(e) + "]"));
                        theta_total.add(fa.theta.back(), 1.0);
                        theta_mu[e].add(fa.theta.back(), 1.0);
                    }
                    for (int e = 0; e < static_cast<int>(Fin.vertices.size()); ++e) {
                        fa.upsilon.push_back(m.add_nonneg("ups" + tag + "[" + hi + "," +
                                                          std::to_string(e) + "]"));
                        ups_total.add(fa.upsilon.back(), 1.0);
                    }
                    std::vector<LinExpr> diff(dim);
                    for (int k = 0; k < dim; ++k) {
                        for (int e = 0; e < static_cast<int>(P.vertices.size()); ++e)
                            diff[k].add(fa.theta[e], P.vertices[e][k]);
                        for (int e = 0; e < static_cast<int>(Fin.vertices.size()); ++e)
                            diff[k].add(fa.upsilon[e], -Fin.vertices[e][k]);
                    }
                    Index seg = m.add_nonneg("arr" + tag + "[" + hi + "]");
                    add_norm_epigraph(m, p, diff, LinExpr::var(seg), "arr" + tag);
                    dsum.add(seg, 1.0);
                    pv.arrivals[i].push_back(std::move(fa));
                }

                // rho/phi rows gain the Theta/Upsilon arrival terms
                for (std::size_t ia = 0; ia < al.in[i].size(); ++ia) {
                    const int a = al.in[i][ia];
                    const FacilityArrival& fa = pv.arrivals[i][ia];
                    LinExpr row;
                    for (const auto& pr : pv.pairs[i])
                        if (pr.in_arc == a) row.add(pr.rho, 1.0);
                    for (Index v : fa.theta) row.add(v, 1.0);
                    row.add(pv.z[a], -1.0);
                    m.add_eq(row, "rho_in" + tag + "[" + idx2(inst.arcs[a].from, i) + "]");
                    const int ne = static_cast<int>(pv.lambda[a].size());
                    for (int e = 0; e < ne; ++e) {
                        LinExpr split;
                        for (const auto& pr : pv.pairs[i])
                            if (pr.in_arc == a) split.add(pr.phi[e], 1.0);
                        split.add(fa.upsilon[e], 1.0);
                        split.add(pv.lambda[a][e], -1.0);
                        m.add_eq(split, "phi_lam" + tag + "[" + idx2(inst.arcs[a].from, i) +
                                            "," + std::to_string(e) + "]");
                    }
                }
                for (int b : al.out[i]) {
                    LinExpr row;
                    for (const auto& pr : pv.pairs[i])
                        if (pr.out_arc == b) row.add(pr.rho, 1.0);
                    row.add(pv.z[b], -1.0);
                    m.add_eq(row, "rho_out" + tag + "[" + idx2(i, inst.arcs[b].to) + "]");
                    const int ne = static_cast<int>(pv.lambda[b].size());
                    for (int e = 0; e < ne; ++e) {
                        LinExpr split;
                        for (const auto& pr : pv.pairs[i])
                            if (pr.out_arc == b) split.add(pr.psi[e], 1.0);
                        split.add(pv.lambda[b][e], -1.0);
                        m.add_eq(split, "psi_lam" + tag + "[" + idx2(i, inst.arcs[b].to) +
                                            "," + std::to_string(e) + "]");
                    }
                }
                ups_total.add(bm.atlas.u[i], -1.0);
                theta_total.add(bm.atlas.u[i], -1.0);
                m.add_eq(ups_total, "ups_u" + tag + "[" + std::to_string(i) + "]");
                m.add_eq(theta_total, "theta_u" + tag + "[" + std::to_string(i) + "]");
                for (int e = 0; e < static_cast<int>(P.vertices.size()); ++e) {
                    theta_mu[e].add(bm.atlas.mu[i][e], -1.0);
                    m.add_eq(theta_mu[e],
                             "theta_mu" + tag + "[" + idx2(i, e) + "]");
                }
            }
            if (!dsum.terms.empty()) {
                dsum.add(pv.d[i], -1.0);
                m.add_le(dsum, "dsum" + tag + "[" + std::to_string(i) + "]");
            }
            obj.add(pv.d[i], inst.demands[l].weight * sub.regions[i].weight);
        }
        bm.atlas.flows.push_back(std::move(pv));
    }
    m.set_objective(obj);
    return bm;
}

namespace {

Vec gate_point(const Subdivision& sub, const AdjacencyGraph& g, const std::vector<Arc>& arcs,
               const PathVars& pv, const Vec& x, int a) {
    const Polytope& F = g.edges[arcs[a].edge].face;
    Vec y = Vec::Zero(sub.dim);
    for (int e = 0; e < static_cast<int>(F.vertices.size()); ++e)
        y += x[pv.lambda[a][e]] * F.vertices[e];
    return y;
}

// Walks the selected arcs from `from` until no arc leaves the current
// region; fills path and gates.
void walk_arcs(const Subdivision& sub, const AdjacencyGraph& g, const std::vector<Arc>& arcs,
               const PathVars& pv, const Vec& x, int from, PathSolution& sol) {
    int cur = from;
    sol.path.push_back(cur);
    for (int steps = 0; steps <= sub.size(); ++steps) {
        int next = -1;
        for (int a = 0; a < static_cast<int>(arcs.size()); ++a)
            if (arcs[a].from == cur && x[pv.z[a]] >= 0.5) {
                if (next >= 0) throw Error("BrokenChain", "two arcs leave one region");
                next = a;
            }
        if (next < 0) return;
        sol.gates.push_back(gate_point(sub, g, arcs, pv, x, next));
        cur = arcs[next].to;
        sol.path.push_back(cur);
    }
    throw Error("BrokenChain", "arc chain longer than the region count");
}

}  // namespace

PathSolution decode_spp(const SppInstance& inst, const VariableAtlas& atlas, const Vec& x,
                        double objective) {
    PathSolution sol;
    sol.value = objective;
    walk_arcs(inst.sub, inst.graph, inst.arcs, atlas.flows[0], x, inst.s, sol);
    if (sol.path.back() != inst.t)
        throw Error("BrokenChain", "decoded chain does not reach the target region");
    return sol;
}

WeberSolution decode_locp(const WeberInstance& inst, const VariableAtlas& atlas, const Vec& x,
                          double objective) {
    WeberSolution sol;
    sol.value = objective;
    for (int i = 0; i < inst.sub.size(); ++i)
        if (x[atlas.u[i]] >= 0.5) {
            if (sol.facility_region >= 0)
                throw Error("BrokenChain", "two facility regions selected");
            sol.facility_region = i;
        }
    if (sol.facility_region < 0) throw Error("BrokenChain", "no facility region selected");
    const Polytope& P = inst.sub.regions[sol.facility_region].polytope;
    sol.facility = Vec::Zero(inst.sub.dim);
    for (int e = 0; e < static_cast<int>(P.vertices.size()); ++e)
        sol.facility += x[atlas.mu[sol.facility_region][e]] * P.vertices[e];

    for (int l = 0; l < static_cast<int>(inst.demands.size()); ++l) {
        PathSolution route;
        walk_arcs(inst.sub, inst.graph, inst.arcs, atlas.flows[l], x,
                  inst.demand_region[l], route);
        if (route.path.back() != sol.facility_region)
            throw Error("BrokenChain", "route does not reach the facility region");
        // recompute the per-demand geodesic length along the breakpoints
        Vec prev = inst.demands[l].point;
        route.value = 0.0;
        for (std::size_t k = 0; k < route.path.size(); ++k) {
            const Region& r = inst.sub.regions[route.path[k]];
            const Vec& next = (k < route.gates.size()) ? route.gates[k] : sol.facility;
            route.value += r.weight * lp_norm(next - prev, r.p);
            prev = next;
        }
        sol.routes.push_back(std::move(route));
    }
    return sol;
}

SppInstance rapid_transit_transform(const SppInstance& inst,
                                    const std::vector<FaceSpec>& faces) {
    if (faces.size() != inst.graph.edges.size())
        throw Error("MissingFaceNorm", "need one face spec per adjacency edge");
    const int m0 = inst.sub.size();
    std::vector<Region> regions = inst.sub.regions;
    for (std::size_t h = 0; h < faces.size(); ++h) {
        Region r;
        r.polytope = inst.graph.edges[h].face;
        r.p = faces[h].p;
        r.weight = faces[h].weight;
        if (r.weight <= 0.0) throw Error("MissingFaceNorm", "face weight must be > 0");
        regions.push_back(std::move(r));
    }

    std::vector<GraphEdge> edges;
    for (std::size_t h = 0; h < faces.size(); ++h) {
        const Polytope& F = inst.graph.edges[h].face;
        for (int i = 0; i < m0; ++i) {
            bool subset = true;
            for (const Vec& v : F.vertices) {
                bool hit = false;
                for (const Vec& u : inst.sub.regions[i].polytope.vertices)
                    if ((u - v).norm() <= Tolerances::vertex_match) {
                        hit = true;
                        break;
                    }
                if (!hit) {
                    subset = false;
                    break;
                }
            }
            if (subset) edges.push_back({i, m0 + static_cast<int>(h), F});
        }
    }

    SppInstance out;
    out.sub = make_subdivision(inst.sub.dim, std::move(regions));
    out.graph = assemble_graph(m0 + static_cast<int>(faces.size()), std::move(edges));
    out.source = inst.source;
    out.target = inst.target;
    out.s = inst.s;
    out.t = inst.t;
    out.arcs = directed_arcs(out.graph);
    return out;
}

SppInstance double_visit_transform(const SppInstance& inst) {
    const int m0 = inst.sub.size();
    std::vector<Region> regions = inst.sub.regions;
    regions.insert(regions.end(), inst.sub.regions.begin(), inst.sub.regions.end());

    std::vector<GraphEdge> edges;
    for (int i = 0; i < 2 * m0; ++i)
        for (int j = i + 1; j < 2 * m0; ++j) {
            const int oi = i % m0, oj = j % m0;
            if (oi == oj) continue;  // a copy never meets its twin
            const int e0 = inst.graph.edge_index(oi, oj);
            if (e0 < 0) continue;
            edges.push_back({i, j, inst.graph.edges[e0].face});
        }

    SppInstance out;
    out.sub = make_subdivision(inst.sub.dim, std::move(regions));
    out.graph = assemble_graph(2 * m0, std::move(edges));
    out.source = inst.source;
    out.target = inst.target;
    out.s = inst.s;
    out.t = inst.t;
    out.arcs = directed_arcs(out.graph);
    return out;
}

}  // namespace wrp
