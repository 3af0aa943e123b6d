#include "wrp/norms.hpp"

#include "wrp/socp.hpp"

#include <cmath>

namespace wrp {

namespace {

// alpha^2 <= beta*delta as the SOC row ||(2 alpha, beta - delta)|| <= beta + delta.
void add_rotated_cone(ConicModel& m, ConeBlock& blk, const LinExpr& alpha, const LinExpr& beta,
                      const LinExpr& delta, const std::string& tag) {
    SocRow row;
    LinExpr rhs = beta;
    rhs += delta;
    row.args.push_back(rhs);
    LinExpr a2 = alpha;
    a2 *= 2.0;
    row.args.push_back(a2);
    LinExpr bd = beta;
    bd -= delta;
    row.args.push_back(bd);
    row.name = tag;
    m.add_soc(std::move(row));
    ++blk.soc_rows;
}

enum class Sym { W, Z, U, Aux };

struct TowerNode {
    Sym sym;
    LinExpr expr;
};

// Compiles  u^q <= w^r * z^(q-r)  (u, w >= 0 variables, z affine) into
// rotated cones.  Leaves of a binary tree over 2^k slots are laid out as
// w..w z..z u..u; identical siblings collapse, so only the block-boundary
// nodes of each level spawn a cone.  Returns the number of cones emitted.
int add_power_tower(ConicModel& m, ConeBlock& blk, const LinExpr& u, const LinExpr& w,
                    const LinExpr& z, long q, long r, const std::string& tag) {
    int k = 0;
    while ((1L << k) < q) ++k;
    long n = 1L << k;
    std::vector<TowerNode> level;
    level.reserve(n);
    for (long i = 0; i < r; ++i) level.push_back({Sym::W, w});
    for (long i = 0; i < q - r; ++i) level.push_back({Sym::Z, z});
    for (long i = 0; i < n - q; ++i) level.push_back({Sym::U, u});
    int cones = 0;
    while (level.size() > 1) {
        std::vector<TowerNode> next;
        next.reserve(level.size() / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            const TowerNode& a = level[i];
            const TowerNode& b = level[i + 1];
            if (a.sym == b.sym && a.sym != Sym::Aux) {
                next.push_back(a);
                continue;
            }
            LinExpr parent;
            if (level.size() == 2) {
                parent = u;  // root bounds the epigraph coordinate itself
            } else {
                Index v = m.add_nonneg(tag + ".t" + std::to_string(blk.aux_vars.size()));
                blk.aux_vars.push_back(v);
                parent = LinExpr::var(v);
            }
            add_rotated_cone(m, blk, parent, a.expr, b.expr, tag);
            ++cones;
            next.push_back({Sym::Aux, parent});
        }
        level = std::move(next);
    }
    return cones;
}

}  // namespace

ConeBlock add_norm_epigraph(ConicModel& m, const PNorm& p, const std::vector<LinExpr>& diff,
                            const LinExpr& z, const std::string& tag) {
    ConeBlock blk;
    const int d = static_cast<int>(diff.size());

    if (p.is_two()) {
        SocRow row;
        row.args.push_back(z);
        for (const auto& e : diff) row.args.push_back(e);
        row.name = tag;
        m.add_soc(std::move(row));
        ++blk.soc_rows;
        return blk;
    }

    if (p.is_polyhedral()) {
        if (d > 10)
            throw Error("DimensionUnsupported",
                        "polyhedral norm linearization capped at d <= 10");
        if (p.is_infinity()) {
            // Ext(B_1) = {+-unit vectors}: z >= +-diff_k.
            for (int k = 0; k < d; ++k) {
                for (double s : {1.0, -1.0}) {
                    LinExpr row = diff[k];
                    row *= s;
                    row -= z;
                    m.add_le(std::move(row), tag);
                    ++blk.linear_rows;
                }
            }
        } else {
            // Ext(B_inf) = {+-1}^d: z >= sum_k s_k diff_k.
            for (long mask = 0; mask < (1L << d); ++mask) {
                LinExpr row;
                for (int k = 0; k < d; ++k) {
                    LinExpr t = diff[k];
                    t *= (mask >> k) & 1 ? -1.0 : 1.0;
                    row += t;
                }
                row -= z;
                m.add_le(std::move(row), tag);
                ++blk.linear_rows;
            }
        }
        return blk;
    }

    // Rational p = q/r, q > r: block (U_k +- diff_k >= 0, sum W_k <= z,
    // U_k^q <= W_k^r z^(q-r)).
    const long q = p.q(), r = p.r();
    LinExpr wsum;
    for (int k = 0; k < d; ++k) {
        Index u = m.add_nonneg(tag + ".u" + std::to_string(k));
        Index w = m.add_nonneg(tag + ".w" + std::to_string(k));
        blk.aux_vars.push_back(u);
        blk.aux_vars.push_back(w);
        for (double s : {1.0, -1.0}) {
            LinExpr row = diff[k];
            row *= s;
            row.add(u, -1.0);  // s*diff_k - u <= 0
            m.add_le(std::move(row), tag);
            ++blk.linear_rows;
        }
        int cones =
            add_power_tower(m, blk, LinExpr::var(u), LinExpr::var(w), z, q, r, tag);
        blk.max_tower_cones = std::max(blk.max_tower_cones, cones);
        wsum.add(w, 1.0);
    }
    wsum -= z;
    m.add_le(std::move(wsum), tag);
    ++blk.linear_rows;
    return blk;
}

ConeBlock norm_epigraph_block(ConicModel& m, const PNorm& p, const std::vector<Index>& x,
                              const std::vector<Index>& y, Index z, const std::string& tag) {
    if (x.size() != y.size()) throw Error("DimensionMismatch", "x and y differ in length");
    std::vector<LinExpr> diff(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        diff[k].add(x[k], 1.0);
        diff[k].add(y[k], -1.0);
    }
    return add_norm_epigraph(m, p, diff, LinExpr::var(z), tag);
}

double verify_block(const PNorm& p, const std::vector<std::pair<Vec, Vec>>& samples) {
    double max_err = 0.0;
    for (const auto& [x, y] : samples) {
        ConicModel m;
        Index z = m.add_nonneg("z");
        std::vector<LinExpr> diff(x.size());
        for (Index k = 0; k < x.size(); ++k) diff[k] = LinExpr(x[k] - y[k]);
        add_norm_epigraph(m, p, diff, LinExpr::var(z), "blk");
        m.set_objective(LinExpr::var(z));
        RelaxSolution sol = solve_relaxation(m);
        if (sol.status != SolveStatus::Optimal)
            throw Error("SolverFailure", "verify_block relaxation did not converge");
        max_err = std::max(max_err, std::abs(sol.objective - lp_norm(x - y, p)));
    }
    return max_err;
}

}  // namespace wrp
