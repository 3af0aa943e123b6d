#include "wrp/verify.hpp"

#include "wrp/norms.hpp"
#include "wrp/socp.hpp"
#include "wrp/solver.hpp"

#include <algorithm>
#include <cmath>

namespace wrp {

namespace {

// max lambda_e subject to b being the convex combination; a vertex belongs
// to the active face iff the maximum is strictly positive.
double max_scalar(const Polytope& F, const Vec& b, int target) {
    ConicModel m;
    std::vector<Index> lam;
    LinExpr conv(-1.0);
    for (std::size_t e = 0; e < F.vertices.size(); ++e) {
        lam.push_back(m.add_nonneg("lam"));
        conv.add(lam.back(), 1.0);
    }
    m.add_eq(conv);
    // slack absorbs the representation noise of solver-decoded gates
    const double slack = 1e-7;
    for (int k = 0; k < F.dim; ++k) {
        LinExpr lo(-b[k] - slack), hi(b[k] - slack);
        for (std::size_t e = 0; e < F.vertices.size(); ++e) {
            lo.add(lam[e], F.vertices[e][k]);
            hi.add(lam[e], -F.vertices[e][k]);
        }
        m.add_le(lo);
        m.add_le(hi);
    }
    m.set_objective(LinExpr::var(lam[target], -1.0));
    RelaxSolution rs = solve_relaxation(m);
    if (rs.status != SolveStatus::Optimal)
        throw Error("PointNotInFace", "no convex representation found");
    return -rs.objective;
}

}  // namespace

Polytope active_face(const Polytope& F, const Vec& b) {
    if (!contains(F, b, 1e-7))
        throw Error("PointNotInFace", "point is outside the face");
    if (F.vertices.size() == 1) return F;
    // a point this close to a vertex is numerically indistinguishable from it
    for (const Vec& v : F.vertices)
        if ((v - b).lpNorm<Eigen::Infinity>() <= 1e-6) return make_polytope(F.dim, {v});
    std::vector<Vec> active;
    for (std::size_t e = 0; e < F.vertices.size(); ++e)
        if (max_scalar(F, b, static_cast<int>(e)) > 1e-6) active.push_back(F.vertices[e]);
    return make_polytope(F.dim, std::move(active));
}

GateContext make_gate_context(const Polytope& face, const Vec& a, const Vec& b,
                              const Vec& c) {
    GateContext ctx;
    ctx.a = a;
    ctx.b = b;
    ctx.c = c;
    ctx.active = active_face(face, b);
    const int n = static_cast<int>(ctx.active.vertices.size());
    if (n <= 1) {
        ctx.basis = Mat::Zero(face.dim, 0);
        return ctx;
    }
    Mat D(face.dim, n - 1);
    for (int k = 1; k < n; ++k)
        D.col(k - 1) = ctx.active.vertices[k] - ctx.active.vertices[0];
    Eigen::JacobiSVD<Mat> svd(D, Eigen::ComputeThinU);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()[k] > 1e-9) ++rank;
    ctx.basis = svd.matrixU().leftCols(rank);
    return ctx;
}

double snell_residual(const GateContext& ctx, const PNorm& pi, const PNorm& pj, double wi,
                      double wj) {
    if (pi.is_polyhedral() || pj.is_polyhedral())
        throw Error("UnsupportedExponent", "refraction residual needs 1 < p < inf");
    if (ctx.basis.cols() == 0) return 0.0;  // vertex face: no tangent directions
    Vec u = polar_vector(ctx.b - ctx.a, pi);
    Vec v = polar_vector(ctx.c - ctx.b, pj);
    const double nu = lp_norm(u, pi.dual()), nv = lp_norm(v, pj.dual());
    if (nu > 0.0) u /= nu;
    if (nv > 0.0) v /= nv;
    double res = 0.0;
    for (int k = 0; k < ctx.basis.cols(); ++k)
        res = std::max(res,
                       std::abs(wi * u.dot(ctx.basis.col(k)) - wj * v.dot(ctx.basis.col(k))));
    return res / (wi + wj);
}

VerifyReport verify_path_optimality(const SppInstance& inst, const PathSolution& sol,
                                    double tol) {
    VerifyReport rep;
    const int dim = inst.sub.dim;
    for (std::size_t k = 0; k < sol.gates.size(); ++k) {
        const int i = sol.path[k], j = sol.path[k + 1];
        const Region& ri = inst.sub.regions[i];
        const Region& rj = inst.sub.regions[j];
        const Polytope& face = inst.graph.edges[inst.graph.edge_index(i, j)].face;
        const Vec& a = (k == 0) ? inst.source : sol.gates[k - 1];
        const Vec& b = sol.gates[k];
        const Vec c = (k + 1 < sol.gates.size()) ? sol.gates[k + 1] : inst.target;

        GateCheck gc;
        // single-gate re-minimization over the face
        ConicModel m;
        std::vector<Index> lam;
        LinExpr conv(-1.0);
        for (std::size_t e = 0; e < face.vertices.size(); ++e) {
            lam.push_back(m.add_nonneg("lam"));
            conv.add(lam.back(), 1.0);
        }
        m.add_eq(conv);
        LinExpr obj;
        for (int side = 0; side < 2; ++side) {
            const Region& r = side == 0 ? ri : rj;
            const Vec& other = side == 0 ? a : c;
            const double sign = side == 0 ? 1.0 : -1.0;
            std::vector<LinExpr> diff(dim);
            for (int t = 0; t < dim; ++t) {
                for (std::size_t e = 0; e < face.vertices.size(); ++e)
                    diff[t].add(lam[e], sign * face.vertices[e][t]);
                diff[t].constant -= sign * other[t];
            }
            Index d = m.add_nonneg("d");
            add_norm_epigraph(m, r.p, diff, LinExpr::var(d));
            obj.add(d, r.weight);
        }
        m.set_objective(obj);
        RelaxSolution rs = solve_relaxation(m);
        const double current =
            ri.weight * lp_norm(b - a, ri.p) + rj.weight * lp_norm(c - b, rj.p);
        if (rs.status == SolveStatus::Optimal)
            gc.improvement = std::max(0.0, current - rs.objective);

        gc.snell = -1.0;
        if (ri.p.is_smooth() && rj.p.is_smooth() && (b - a).norm() > 1e-9 &&
            (c - b).norm() > 1e-9) {
            GateContext ctx = make_gate_context(face, a, b, c);
            gc.snell = snell_residual(ctx, ri.p, rj.p, ri.weight, rj.weight);
            rep.max_snell = std::max(rep.max_snell, gc.snell);
        }
        rep.max_improvement = std::max(rep.max_improvement, gc.improvement);
        rep.gates.push_back(gc);
    }
    rep.passed = rep.max_snell <= tol &&
                 rep.max_improvement <= tol * std::max(1.0, std::abs(sol.value));
    return rep;
}

namespace {

// gradient of |x|_p at x != 0 for smooth p
Vec norm_gradient(const Vec& x, const PNorm& p) {
    Vec w = polar_vector(x, p);
    return w / lp_norm(w, p.dual());
}

}  // namespace

void polish_gates(const SppInstance& inst, PathSolution& sol, int sweeps) {
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double moved = 0.0;
        for (std::size_t k = 0; k < sol.gates.size(); ++k) {
            const Region& ri = inst.sub.regions[sol.path[k]];
            const Region& rj = inst.sub.regions[sol.path[k + 1]];
            if (!ri.p.is_smooth() || !rj.p.is_smooth()) continue;
            const Polytope& face =
                inst.graph.edges[inst.graph.edge_index(sol.path[k], sol.path[k + 1])].face;
            const Vec& a = (k == 0) ? inst.source : sol.gates[k - 1];
            const Vec c = (k + 1 < sol.gates.size()) ? sol.gates[k + 1] : inst.target;
            Vec b = sol.gates[k];
            if ((b - a).norm() <= 1e-9 || (c - b).norm() <= 1e-9) continue;
            GateContext ctx = make_gate_context(face, a, b, c);
            const Mat& Q = ctx.basis;
            if (Q.cols() == 0) continue;

            auto value = [&](const Vec& y) {
                return ri.weight * lp_norm(y - a, ri.p) + rj.weight * lp_norm(c - y, rj.p);
            };
            auto grad = [&](const Vec& y) -> Vec {
                return Q.transpose() * (ri.weight * norm_gradient(y - a, ri.p) -
                                        rj.weight * norm_gradient(c - y, rj.p));
            };
            for (int it = 0; it < 30; ++it) {
                Vec g = grad(b);
                if (g.lpNorm<Eigen::Infinity>() <= 1e-12) break;
                // finite-difference hessian of the reduced objective
                const double h = 1e-6;
                Mat H(Q.cols(), Q.cols());
                for (int c2 = 0; c2 < Q.cols(); ++c2)
                    H.col(c2) = (grad(b + h * Q.col(c2)) - grad(b - h * Q.col(c2))) / (2 * h);
                H = 0.5 * (H + H.transpose());
                Vec dt = H.ldlt().solve(-g);
                if (!dt.allFinite() || dt.dot(g) >= 0.0) dt = -g;
                bool accepted = false;
                double step = 1.0;
                const double f0 = value(b);
                for (int bt = 0; bt < 25; ++bt, step *= 0.5) {
                    Vec cand = b + step * (Q * dt);
                    if (!contains(face, cand, 1e-9)) continue;
                    if ((cand - a).norm() <= 1e-9 || (c - cand).norm() <= 1e-9) continue;
                    if (value(cand) <= f0 + 1e-15) {
                        moved = std::max(moved, (cand - b).norm());
                        b = cand;
                        accepted = true;
                        break;
                    }
                }
                if (!accepted) break;
            }
            sol.gates[k] = b;
        }
        if (moved <= 1e-13) break;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < sol.path.size(); ++k) {
        const Vec& a = (k == 0) ? inst.source : sol.gates[k - 1];
        const Vec& b = (k < sol.gates.size()) ? sol.gates[k] : inst.target;
        const Region& r = inst.sub.regions[sol.path[k]];
        total += r.weight * lp_norm(b - a, r.p);
    }
    sol.value = total;
}

std::pair<double, double> dominance_check_spp(const SppInstance& inst) {
    const double zeta = solve_relaxation(relax(build_spp_f1(inst).model)).objective;
    const double zeta2 = solve_relaxation(relax(build_spp_f2(inst).model)).objective;
    if (zeta > zeta2 + 1e-7)
        throw Error("DominanceViolated", "aggregated relaxation exceeds disaggregated");
    return {zeta, zeta2};
}

std::pair<double, double> dominance_check_locp(const WeberInstance& inst) {
    const double zeta = solve_relaxation(relax(build_locp_f1(inst).model)).objective;
    const double zeta2 = solve_relaxation(relax(build_locp_f2(inst).model)).objective;
    if (zeta > zeta2 + 1e-7)
        throw Error("DominanceViolated", "aggregated relaxation exceeds disaggregated");
    return {zeta, zeta2};
}

TriangleDemo triangle_violation_demo() {
    auto pt = [](double x, double y) {
        Vec v(2);
        v << x, y;
        return v;
    };
    std::vector<Region> regs(3);
    regs[0].polytope = make_polytope(2, {pt(-2, 3), pt(7, 12), pt(-2, 12)});
    regs[1].polytope = make_polytope(2, {pt(-2, -2), pt(12, 12), pt(7, 12), pt(-2, 3)});
    regs[2].polytope = make_polytope(2, {pt(-2, -2), pt(12, -2), pt(12, 12)});
    for (int i = 0; i < 3; ++i) {
        regs[i].p = PNorm::one();
        regs[i].weight = i + 1.0;
    }
    Subdivision sub = make_subdivision(2, std::move(regs));
    auto D = [&](const Vec& a, const Vec& b) {
        return solve_spp(make_spp_instance(sub, a, b), true).report.ub;
    };
    TriangleDemo demo;
    demo.d_st = D(pt(1, 0), pt(10, 9));
    demo.d_su = D(pt(1, 0), pt(1, 9));
    demo.d_ut = D(pt(1, 9), pt(10, 9));
    demo.violated = demo.d_st > demo.d_su + demo.d_ut;
    return demo;
}

}  // namespace wrp
