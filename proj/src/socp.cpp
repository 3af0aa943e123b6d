#include "wrp/socp.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace wrp {

namespace {

using Triplet = Eigen::Triplet<double>;

constexpr double kReg = 1e-9;  // static KKT regularization

void push_expr(std::vector<Triplet>& trip, Index row, const LinExpr& e, double scale) {
    for (const auto& t : e.terms) trip.emplace_back(row, t.var, scale * t.coef);
}

// Nesterov-Todd scaling point of the cone pair (s, z), cached per cone.
struct Scaling {
    const ConeDims* dims = nullptr;
    Vec wdiag;                 // orthant: sqrt(s_i / z_i)
    std::vector<double> eta;   // per SOC block
    std::vector<Vec> wbar;     // per SOC block, wbar0^2 - ||wbar1||^2 = 1
    Vec lambda;                // W z = W^{-1} s

    static Scaling identity(const ConeDims& d) {
        Scaling sc;
        sc.dims = &d;
        sc.wdiag = Vec::Ones(d.l);
        for (int k : d.soc) {
            sc.eta.push_back(1.0);
            Vec wb = Vec::Zero(k);
            wb[0] = 1.0;
            sc.wbar.push_back(wb);
        }
        return sc;
    }
};

double soc_res(const Eigen::Ref<const Vec>& u) {
    return u[0] - u.tail(u.size() - 1).norm();
}

Vec apply_W(const Scaling& sc, const Vec& v);

Scaling compute_scaling(const ConeDims& d, const Vec& s, const Vec& z) {
    Scaling sc;
    sc.dims = &d;
    sc.wdiag = (s.head(d.l).array() / z.head(d.l).array()).sqrt();
    int off = d.l;
    for (int k : d.soc) {
        auto sb = s.segment(off, k);
        auto zb = z.segment(off, k);
        double ns1 = sb.tail(k - 1).norm(), nz1 = zb.tail(k - 1).norm();
        double zeta_s = std::sqrt(std::max((sb[0] - ns1) * (sb[0] + ns1), 1e-300));
        double zeta_z = std::sqrt(std::max((zb[0] - nz1) * (zb[0] + nz1), 1e-300));
        Vec sbar = sb / zeta_s, zbar = zb / zeta_z;
        double gamma = std::sqrt((1.0 + sbar.dot(zbar)) / 2.0);
        Vec wb(k);
        wb[0] = (sbar[0] + zbar[0]) / (2.0 * gamma);
        wb.tail(k - 1) = (sbar.tail(k - 1) - zbar.tail(k - 1)) / (2.0 * gamma);
        sc.eta.push_back(std::sqrt(zeta_s / zeta_z));
        sc.wbar.push_back(wb);
        off += k;
    }
    sc.lambda = apply_W(sc, z);
    return sc;
}

// W v (W symmetric).
Vec apply_W(const Scaling& sc, const Vec& v) {
    const ConeDims& d = *sc.dims;
    Vec out(d.total());
    out.head(d.l) = sc.wdiag.array() * v.head(d.l).array();
    int off = d.l;
    for (std::size_t i = 0; i < d.soc.size(); ++i) {
        int k = d.soc[i];
        const Vec& wb = sc.wbar[i];
        auto vb = v.segment(off, k);
        double dot1 = wb.tail(k - 1).dot(vb.tail(k - 1));
        out[off] = sc.eta[i] * (wb[0] * vb[0] + dot1);
        out.segment(off + 1, k - 1) =
            sc.eta[i] * (vb[0] * wb.tail(k - 1) + vb.tail(k - 1) +
                         dot1 / (1.0 + wb[0]) * wb.tail(k - 1));
        off += k;
    }
    return out;
}

Vec apply_Winv(const Scaling& sc, const Vec& v) {
    const ConeDims& d = *sc.dims;
    Vec out(d.total());
    out.head(d.l) = v.head(d.l).array() / sc.wdiag.array();
    int off = d.l;
    for (std::size_t i = 0; i < d.soc.size(); ++i) {
        int k = d.soc[i];
        const Vec& wb = sc.wbar[i];
        auto vb = v.segment(off, k);
        double dot1 = wb.tail(k - 1).dot(vb.tail(k - 1));
        out[off] = (wb[0] * vb[0] - dot1) / sc.eta[i];
        out.segment(off + 1, k - 1) =
            (-vb[0] * wb.tail(k - 1) + vb.tail(k - 1) +
             dot1 / (1.0 + wb[0]) * wb.tail(k - 1)) /
            sc.eta[i];
        off += k;
    }
    return out;
}

// W^T W v = W^2 v.
Vec apply_W2(const Scaling& sc, const Vec& v) {
    const ConeDims& d = *sc.dims;
    Vec out(d.total());
    out.head(d.l) = sc.wdiag.array().square() * v.head(d.l).array();
    int off = d.l;
    for (std::size_t i = 0; i < d.soc.size(); ++i) {
        int k = d.soc[i];
        const Vec& wb = sc.wbar[i];
        auto vb = v.segment(off, k);
        double e2 = sc.eta[i] * sc.eta[i];
        double wv = wb.dot(vb);
        out[off] = e2 * (2.0 * wb[0] * wv - vb[0]);
        out.segment(off + 1, k - 1) =
            e2 * (2.0 * wv * wb.tail(k - 1) + vb.tail(k - 1));
        off += k;
    }
    return out;
}

// Jordan product u o v.
Vec jprod(const ConeDims& d, const Vec& u, const Vec& v) {
    Vec out(d.total());
    out.head(d.l) = u.head(d.l).array() * v.head(d.l).array();
    int off = d.l;
    for (int k : d.soc) {
        auto ub = u.segment(off, k);
        auto vb = v.segment(off, k);
        out[off] = ub.dot(vb);
        out.segment(off + 1, k - 1) = ub[0] * vb.tail(k - 1) + vb[0] * ub.tail(k - 1);
        off += k;
    }
    return out;
}

// Solve lambda o x = dd.
Vec jsolve(const ConeDims& d, const Vec& lambda, const Vec& dd) {
    Vec out(d.total());
    out.head(d.l) = dd.head(d.l).array() / lambda.head(d.l).array();
    int off = d.l;
    for (int k : d.soc) {
        auto lb = lambda.segment(off, k);
        auto db = dd.segment(off, k);
        double det = lb[0] * lb[0] - lb.tail(k - 1).squaredNorm();
        double x0 = (lb[0] * db[0] - lb.tail(k - 1).dot(db.tail(k - 1))) / det;
        out[off] = x0;
        out.segment(off + 1, k - 1) = (db.tail(k - 1) - x0 * lb.tail(k - 1)) / lb[0];
        off += k;
    }
    return out;
}

Vec cone_e(const ConeDims& d) {
    Vec e = Vec::Zero(d.total());
    e.head(d.l).setOnes();
    int off = d.l;
    for (int k : d.soc) {
        e[off] = 1.0;
        off += k;
    }
    return e;
}

// Largest alpha with u + alpha du in the cone (u strictly interior);
// kInf when unbounded.
double max_step(const ConeDims& d, const Vec& u, const Vec& du) {
    double alpha = kInf;
    for (int i = 0; i < d.l; ++i)
        if (du[i] < 0.0) alpha = std::min(alpha, -u[i] / du[i]);
    int off = d.l;
    for (int k : d.soc) {
        auto ub = u.segment(off, k);
        auto db = du.segment(off, k);
        double a = db[0] * db[0] - db.tail(k - 1).squaredNorm();
        double b = 2.0 * (ub[0] * db[0] - ub.tail(k - 1).dot(db.tail(k - 1)));
        double c = ub[0] * ub[0] - ub.tail(k - 1).squaredNorm();
        if (db[0] < 0.0) alpha = std::min(alpha, -ub[0] / db[0]);
        double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            double sq = std::sqrt(disc);
            for (double root : {a != 0.0 ? (-b - sq) / (2.0 * a) : -c / b,
                                a != 0.0 ? (-b + sq) / (2.0 * a) : kInf}) {
                if (root > 0.0) alpha = std::min(alpha, root);
            }
        }
        off += k;
    }
    return alpha;
}

// Shift u into the cone interior the way cvxopt initializes: if the residual
// to the boundary is <= 0, add a multiple of the identity element.
void bring_interior(const ConeDims& d, Vec& u) {
    double worst = -kInf;
    for (int i = 0; i < d.l; ++i) worst = std::max(worst, -u[i]);
    int off = d.l;
    for (int k : d.soc) {
        worst = std::max(worst, -soc_res(u.segment(off, k)));
        off += k;
    }
    if (worst >= 0.0) {
        Vec e = cone_e(d);
        u += (1.0 + worst) * e;
    }
}

class KktSolver {
  public:
    KktSolver(const StandardForm& sf) : sf_(sf) {
        n_ = sf.n;
        p_ = static_cast<int>(sf.b.size());
        M_ = sf.dims.total();
        N_ = n_ + p_ + M_;
        base_.reserve(sf.A.nonZeros() + sf.G.nonZeros());
        for (int j = 0; j < sf.A.outerSize(); ++j)
            for (SpMat::InnerIterator it(sf.A, j); it; ++it)
                base_.emplace_back(n_ + static_cast<int>(it.row()), j, it.value());
        for (int j = 0; j < sf.G.outerSize(); ++j)
            for (SpMat::InnerIterator it(sf.G, j); it; ++it)
                base_.emplace_back(n_ + p_ + static_cast<int>(it.row()), j, it.value());
    }

    bool factor(const Scaling& sc) {
        scal_ = &sc;
        // retry with escalating regularization if LDLT breaks down near the
        // cone boundary
        for (double reg = kReg; reg <= 1e-4; reg *= 100.0) {
            if (try_factor(sc, reg)) return true;
        }
        return false;
    }

    // Solve against the unregularized matrix via iterative refinement.
    Vec solve(const Vec& rhs) const {
        Vec v = ldlt_.solve(rhs);
        for (int it = 0; it < 2; ++it) {
            Vec r = rhs - matvec(v);
            v += ldlt_.solve(r);
        }
        return v;
    }

  private:
    bool try_factor(const Scaling& sc, double reg) {
        std::vector<Triplet> trip = base_;
        const ConeDims& d = sf_.dims;
        int zoff = n_ + p_;
        for (int i = 0; i < n_; ++i) trip.emplace_back(i, i, reg);
        for (int i = 0; i < p_; ++i) trip.emplace_back(n_ + i, n_ + i, -reg);
        for (int i = 0; i < d.l; ++i)
            trip.emplace_back(zoff + i, zoff + i,
                              -(sc.wdiag[i] * sc.wdiag[i] + reg));
        int off = d.l;
        for (std::size_t ci = 0; ci < d.soc.size(); ++ci) {
            int k = d.soc[ci];
            const Vec& wb = sc.wbar[ci];
            double e2 = sc.eta[ci] * sc.eta[ci];
            for (int a = 0; a < k; ++a) {
                for (int b = 0; b <= a; ++b) {
                    double jab = (a == b) ? (a == 0 ? 1.0 : -1.0) : 0.0;
                    double val = -e2 * (2.0 * wb[a] * wb[b] - jab);
                    if (a == b) val -= reg;
                    trip.emplace_back(zoff + off + a, zoff + off + b, val);
                }
            }
            off += k;
        }
        SpMat K(N_, N_);
        K.setFromTriplets(trip.begin(), trip.end());
        if (!analyzed_) {
            ldlt_.analyzePattern(K);
            analyzed_ = true;
        }
        ldlt_.factorize(K);
        return ldlt_.info() == Eigen::Success;
    }

    Vec matvec(const Vec& v) const {
        Vec out(N_);
        auto vx = v.head(n_);
        auto vy = v.segment(n_, p_);
        auto vz = v.tail(M_);
        out.head(n_) = sf_.A.transpose() * vy + sf_.G.transpose() * vz;
        out.segment(n_, p_) = sf_.A * vx;
        out.tail(M_) = sf_.G * vx - apply_W2(*scal_, vz);
        return out;
    }

    const StandardForm& sf_;
    int n_, p_, M_, N_;
    std::vector<Triplet> base_;
    const Scaling* scal_ = nullptr;
    Eigen::SimplicialLDLT<SpMat> ldlt_;
    bool analyzed_ = false;
};

}  // namespace

StandardForm to_standard_form(const ConicModel& m) {
    StandardForm sf;
    sf.n = static_cast<int>(m.num_vars());
    sf.obj_const = m.objective().constant;
    sf.c = Vec::Zero(sf.n);
    for (const auto& t : m.objective().terms) sf.c[t.var] += t.coef;

    std::vector<Triplet> atrip, gtrip;
    std::vector<double> bvals, hvals;
    for (const auto& row : m.linear_rows()) {
        if (row.kind != RowKind::Eq) continue;
        push_expr(atrip, static_cast<Index>(bvals.size()), row.expr, 1.0);
        bvals.push_back(-row.expr.constant);
    }
    for (Index v = 0; v < m.num_vars(); ++v) {
        double lb = m.lower_bound(v), ub = m.upper_bound(v);
        if (std::isfinite(lb) && lb == ub) {
            atrip.emplace_back(static_cast<int>(bvals.size()), v, 1.0);
            bvals.push_back(lb);
        }
    }

    // orthant rows:  g'x <= h
    auto le_row = [&](const LinExpr& e) {
        push_expr(gtrip, static_cast<Index>(hvals.size()), e, 1.0);
        hvals.push_back(-e.constant);
    };
    for (const auto& row : m.linear_rows())
        if (row.kind == RowKind::Le) le_row(row.expr);
    for (Index v = 0; v < m.num_vars(); ++v) {
        double lb = m.lower_bound(v), ub = m.upper_bound(v);
        if (std::isfinite(lb) && lb == ub) continue;
        if (std::isfinite(lb)) le_row(LinExpr(lb) += LinExpr::var(v, -1.0));
        if (std::isfinite(ub)) le_row(LinExpr(-ub) += LinExpr::var(v));
    }
    for (const auto& cone : m.soc_rows())
        if (cone.args.size() == 1) le_row([&] {
                LinExpr e = cone.args[0];
                e *= -1.0;
                return e;
            }());
    sf.dims.l = static_cast<int>(hvals.size());

    // SOC blocks: s = h - Gx stacks (rhs, components).
    for (const auto& cone : m.soc_rows()) {
        if (cone.args.size() == 1) continue;
        for (const auto& a : cone.args) {
            push_expr(gtrip, static_cast<Index>(hvals.size()), a, -1.0);
            hvals.push_back(a.constant);
        }
        sf.dims.soc.push_back(static_cast<int>(cone.args.size()));
    }

    sf.A.resize(static_cast<int>(bvals.size()), sf.n);
    sf.A.setFromTriplets(atrip.begin(), atrip.end());
    sf.G.resize(static_cast<int>(hvals.size()), sf.n);
    sf.G.setFromTriplets(gtrip.begin(), gtrip.end());
    sf.b = Eigen::Map<Vec>(bvals.data(), static_cast<Index>(bvals.size()));
    sf.h = Eigen::Map<Vec>(hvals.data(), static_cast<Index>(hvals.size()));
    return sf;
}

ConicResult solve_standard(const StandardForm& sf, const IpmOptions& opts) {
    const ConeDims& dims = sf.dims;
    const int n = sf.n, p = static_cast<int>(sf.b.size()), M = dims.total();
    ConicResult res;
    res.status = SolveStatus::NumericalTrouble;

    if (M == 0) {
        // pure equality-constrained LP
        KktSolver kkt(sf);
        Scaling id = Scaling::identity(dims);
        if (!kkt.factor(id)) {
            res.message = "factorization failed";
            return res;
        }
        Vec rhs(n + p);
        rhs.head(n) = -sf.c;
        rhs.tail(p) = sf.b;
        Vec sol = kkt.solve(rhs);
        res.x = sol.head(n);
        res.y = sol.tail(p);
        res.s = Vec::Zero(0);
        res.z = Vec::Zero(0);
        res.pobj = sf.c.dot(res.x) + sf.obj_const;
        double pres = (sf.A * res.x - sf.b).norm() / std::max(1.0, sf.b.norm());
        res.status = pres <= opts.feastol ? SolveStatus::Optimal
                                          : SolveStatus::Infeasible;
        return res;
    }

    KktSolver kkt(sf);
    const double nu1 = dims.nu() + 1;
    const Vec e = cone_e(dims);

    // initialization: least-squares point from the identity-scaled system
    Vec x, y, z, s;
    double tau = 1.0, kappa = 1.0;
    {
        Scaling id = Scaling::identity(dims);
        if (!kkt.factor(id)) {
            res.message = "initial factorization failed";
            return res;
        }
        Vec rhs1 = Vec::Zero(n + p + M);
        rhs1.segment(n, p) = sf.b;
        rhs1.tail(M) = sf.h;
        Vec sol1 = kkt.solve(rhs1);
        x = sol1.head(n);
        s = -sol1.tail(M);
        Vec rhs2 = Vec::Zero(n + p + M);
        rhs2.head(n) = -sf.c;
        Vec sol2 = kkt.solve(rhs2);
        y = sol2.segment(n, p);
        z = sol2.tail(M);
        bring_interior(dims, s);
        bring_interior(dims, z);
    }

    const double bnorm = std::max(1.0, sf.b.norm());
    const double hnorm = std::max(1.0, sf.h.norm());
    const double cnorm = std::max(1.0, sf.c.norm());
    int stalls = 0;

    // best iterate seen, in case the solve breaks down just short of the
    // target tolerance
    double best_merit = kInf;
    Vec bx, by, bz, bs;
    double btau = 1.0;
    bool best_ok = false;

    for (int iter = 0; iter <= opts.max_iters; ++iter) {
        res.iterations = iter;

        Vec rx = sf.A.transpose() * y + sf.G.transpose() * z + sf.c * tau;
        Vec ry = sf.A * x - sf.b * tau;
        Vec rz = sf.G * x + s - sf.h * tau;
        double rt = sf.c.dot(x) + sf.b.dot(y) + sf.h.dot(z) + kappa;
        double mu = (s.dot(z) + tau * kappa) / nu1;

        double pres = std::max((sf.A * x / tau - sf.b).norm() / bnorm,
                               (sf.G * x / tau + s / tau - sf.h).norm() / hnorm);
        double dres =
            (sf.A.transpose() * y / tau + sf.G.transpose() * z / tau + sf.c).norm() /
            cnorm;
        double pobj = sf.c.dot(x) / tau;
        double dobj = -sf.b.dot(y) / tau - sf.h.dot(z) / tau;
        double gap = s.dot(z) / (tau * tau);
        double relgap = gap / std::max(1.0, std::abs(pobj));
        if (opts.verbose)
            std::printf("it %3d  pres %.2e dres %.2e gap %.2e pobj %+.9e tau %.2e\n",
                        iter, pres, dres, relgap, pobj, tau);

        if (pres <= opts.feastol && dres <= opts.feastol &&
            (gap <= opts.abstol || relgap <= opts.reltol)) {
            res.status = SolveStatus::Optimal;
            res.x = x / tau;
            res.y = y / tau;
            res.z = z / tau;
            res.s = s / tau;
            res.pobj = pobj + sf.obj_const;
            return res;
        }
        double merit = std::max({pres, dres, std::min(gap, relgap)});
        if (std::isfinite(merit) && merit < best_merit) {
            best_merit = merit;
            bx = x;
            by = y;
            bz = z;
            bs = s;
            btau = tau;
            best_ok = pres <= 10.0 * opts.feastol && dres <= 10.0 * opts.feastol &&
                      (gap <= 10.0 * opts.abstol || relgap <= 10.0 * opts.reltol);
        }
        double cert = -(sf.b.dot(y) + sf.h.dot(z));
        if (cert > 0.0) {
            double infres =
                (sf.A.transpose() * y + sf.G.transpose() * z).norm() / cert / cnorm;
            if (infres <= opts.feastol) {
                res.status = SolveStatus::Infeasible;
                res.y = y / cert;
                res.z = z / cert;
                res.message = "primal infeasibility certificate";
                return res;
            }
        }
        double ctx = -sf.c.dot(x);
        if (ctx > 0.0) {
            double unb = std::max((sf.A * x).norm() / bnorm, (sf.G * x + s).norm() / hnorm) /
                         ctx;
            if (unb <= opts.feastol) {
                res.message = "objective unbounded below";
                return res;
            }
        }
        if (iter == opts.max_iters) {
            res.message = "iteration limit";
            break;
        }

        Scaling sc = compute_scaling(dims, s, z);
        if (!kkt.factor(sc)) {
            res.message = "factorization failed";
            break;
        }

        Vec rhs1(n + p + M);
        rhs1.head(n) = -sf.c;
        rhs1.segment(n, p) = sf.b;
        rhs1.tail(M) = sf.h;
        Vec xi1 = kkt.solve(rhs1);
        double denom = sf.c.dot(xi1.head(n)) + sf.b.dot(xi1.segment(n, p)) +
                       sf.h.dot(xi1.tail(M)) - kappa / tau;

        auto direction = [&](const Vec& ds, double dkappa, double rscale, Vec& dx,
                             Vec& dy, Vec& dz, Vec& dsv, double& dtau, double& dkap) {
            Vec rhs2(n + p + M);
            rhs2.head(n) = -rscale * rx;
            rhs2.segment(n, p) = -rscale * ry;
            Vec wlds = apply_W(sc, jsolve(dims, sc.lambda, ds));
            rhs2.tail(M) = -rscale * rz - wlds;
            Vec xi2 = kkt.solve(rhs2);
            double rt_t = -rscale * rt - dkappa / tau;
            double num = rt_t - (sf.c.dot(xi2.head(n)) + sf.b.dot(xi2.segment(n, p)) +
                                 sf.h.dot(xi2.tail(M)));
            dtau = num / denom;
            dx = xi2.head(n) + dtau * xi1.head(n);
            dy = xi2.segment(n, p) + dtau * xi1.segment(n, p);
            dz = xi2.tail(M) + dtau * xi1.tail(M);
            dsv = wlds - apply_W2(sc, dz);
            dkap = (dkappa - kappa * dtau) / tau;
        };

        auto step_bound = [&](const Vec& dsv, const Vec& dz, double dtau, double dkap) {
            double a = std::min(max_step(dims, s, dsv), max_step(dims, z, dz));
            if (dtau < 0.0) a = std::min(a, -tau / dtau);
            if (dkap < 0.0) a = std::min(a, -kappa / dkap);
            return a;
        };

        // predictor
        Vec ds_aff = -jprod(dims, sc.lambda, sc.lambda);
        Vec dx, dy, dz, dsv;
        double dtau, dkap;
        direction(ds_aff, -tau * kappa, 1.0, dx, dy, dz, dsv, dtau, dkap);
        double a_aff = std::min(1.0, step_bound(dsv, dz, dtau, dkap));
        double mu_aff = ((s + a_aff * dsv).dot(z + a_aff * dz) +
                         (tau + a_aff * dtau) * (kappa + a_aff * dkap)) /
                        nu1;
        double sigma = std::pow(std::max(0.0, std::min(1.0, mu_aff / mu)), 3);

        // corrector
        Vec eta_corr = jprod(dims, apply_Winv(sc, dsv), apply_W(sc, dz));
        Vec ds = ds_aff - eta_corr + sigma * mu * e;
        double dkappa = -tau * kappa - dtau * dkap + sigma * mu;
        direction(ds, dkappa, 1.0 - sigma, dx, dy, dz, dsv, dtau, dkap);

        double alpha = std::min(1.0, 0.99 * step_bound(dsv, dz, dtau, dkap));
        if (alpha < 1e-5) {
            if (++stalls >= 3) {
                res.message = "step size stalled";
                break;
            }
        } else {
            stalls = 0;
        }
        x += alpha * dx;
        y += alpha * dy;
        z += alpha * dz;
        s += alpha * dsv;
        tau += alpha * dtau;
        kappa += alpha * dkap;
    }

    if (best_ok) {
        res.status = SolveStatus::Optimal;
        res.x = bx / btau;
        res.y = by / btau;
        res.z = bz / btau;
        res.s = bs / btau;
        res.pobj = sf.c.dot(res.x) + sf.obj_const;
        res.message += " (accepted at reduced tolerance)";
        return res;
    }
    res.x = x / tau;
    res.y = y / tau;
    res.z = z / tau;
    res.s = s / tau;
    res.pobj = sf.c.dot(res.x) + sf.obj_const;
    return res;
}

RelaxSolution solve_relaxation(const ConicModel& m, const IpmOptions& opts) {
    if (m.num_binaries() > 0)
        throw Error("BinariesPresent", "relax the model before the conic solve");
    StandardForm sf = to_standard_form(m);
    ConicResult cr = solve_standard(sf, opts);
    RelaxSolution out;
    out.status = cr.status;
    out.iterations = cr.iterations;
    out.message = cr.message;
    out.x = cr.x;
    out.dual_y = cr.y;
    out.dual_z = cr.z;
    if (cr.status == SolveStatus::Optimal) {
        out.objective = cr.pobj;
        out.max_lin_violation = m.max_linear_violation(cr.x);
        out.max_soc_violation = m.max_soc_violation(cr.x);
    }
    return out;
}

}  // namespace wrp
