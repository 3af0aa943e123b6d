#include "wrp/geometry.hpp"

#include "wrp/socp.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace wrp {

namespace {

double cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew monotone chain, CCW, collinear points dropped.
std::vector<Vec> hull2d(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    const int n = static_cast<int>(pts.size());
    if (n <= 2) return pts;
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    double eps = 1e-12 * std::max(1.0, scale * scale);
    std::vector<Vec> h;
    for (const auto& p : pts) {  // lower
        while (h.size() >= 2 && cross2(h[h.size() - 2], h.back(), p) <= eps) h.pop_back();
        h.push_back(p);
    }
    std::size_t lower = h.size() + 1;
    for (int i = n - 2; i >= 0; --i) {  // upper
        while (h.size() >= lower && cross2(h[h.size() - 2], h.back(), pts[i]) <= eps)
            h.pop_back();
        h.push_back(pts[i]);
    }
    h.pop_back();
    return h;
}

double dist_point_segment(const Vec& x, const Vec& u, const Vec& v) {
    Vec d = v - u;
    double len2 = d.squaredNorm();
    if (len2 == 0.0) return (x - u).norm();
    double t = std::clamp((x - u).dot(d) / len2, 0.0, 1.0);
    return (x - u - t * d).norm();
}

bool in_poly2d(const std::vector<Vec>& hull, const Vec& x, double tol) {
    const int n = static_cast<int>(hull.size());
    for (int k = 0; k < n; ++k) {
        const Vec& u = hull[k];
        const Vec& v = hull[(k + 1) % n];
        Vec e = v - u;
        double len = e.norm();
        if (len == 0.0) continue;
        // signed distance to the edge line, negative outside a CCW polygon
        double sd = ((x[0] - u[0]) * e[1] - (x[1] - u[1]) * e[0]) / len;
        if (sd > tol) return false;
    }
    return true;
}

// distance from x to conv(vertices) via the embedded conic engine (general d)
double hull_distance(const std::vector<Vec>& verts, const Vec& x) {
    ConicModel m;
    const int d = static_cast<int>(x.size());
    const int n = static_cast<int>(verts.size());
    Index t = m.add_nonneg("t");
    LinExpr lsum;
    std::vector<Index> lam(n);
    for (int k = 0; k < n; ++k) {
        lam[k] = m.add_var("l" + std::to_string(k), 0.0, 1.0);
        lsum.add(lam[k], 1.0);
    }
    lsum -= LinExpr(1.0);
    m.add_eq(std::move(lsum), "sum");
    SocRow cone;
    cone.args.push_back(LinExpr::var(t));
    for (int c = 0; c < d; ++c) {
        LinExpr comp(-x[c]);
        for (int k = 0; k < n; ++k) comp.add(lam[k], verts[k][c]);
        cone.args.push_back(std::move(comp));
    }
    m.add_soc(std::move(cone));
    m.set_objective(LinExpr::var(t));
    auto sol = solve_relaxation(m);
    if (sol.status != SolveStatus::Optimal)
        throw Error("SolverFailure", "hull distance subproblem did not converge");
    return std::max(0.0, sol.objective);
}

}  // namespace

int affine_dim(const Polytope& P, double tol) {
    const int n = static_cast<int>(P.vertices.size());
    if (n <= 1) return 0;
    Mat D(P.dim, n - 1);
    for (int k = 1; k < n; ++k) D.col(k - 1) = P.vertices[k] - P.vertices[0];
    Eigen::JacobiSVD<Mat> svd(D);
    double thresh = tol * std::max(1.0, svd.singularValues()[0]);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()[k] > thresh) ++rank;
    return rank;
}

Vec centroid(const Polytope& P) {
    Vec c = Vec::Zero(P.dim);
    for (const auto& v : P.vertices) c += v;
    return c / static_cast<double>(P.vertices.size());
}

Polytope make_polytope(int dim, std::vector<Vec> pts) {
    std::vector<Vec> uniq;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : uniq)
            if ((p - q).norm() <= Tolerances::vertex_match) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(p);
    }
    if (uniq.empty()) throw Error("EmptyPolytope", "no vertices");
    Polytope P{dim, uniq};
    if (uniq.size() <= 2) return P;

    if (dim == 2) {
        int ad = affine_dim(P);
        if (ad <= 1) {
            // collinear: keep the two endpoints along the spanning direction
            Vec dir = uniq[1] - uniq[0];
            for (std::size_t k = 2; k < uniq.size() && dir.norm() < 1e-12; ++k)
                dir = uniq[k] - uniq[0];
            auto [lo, hi] = std::minmax_element(
                uniq.begin(), uniq.end(),
                [&](const Vec& a, const Vec& b) { return dir.dot(a) < dir.dot(b); });
            P.vertices = {*lo, *hi};
            return P;
        }
        P.vertices = hull2d(uniq);
        return P;
    }

    // general d: drop points inside the hull of the rest
    std::vector<Vec> keep = uniq;
    for (std::size_t k = 0; k < keep.size();) {
        std::vector<Vec> rest;
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (j != k) rest.push_back(keep[j]);
        if (rest.size() >= 1 &&
            hull_distance(rest, keep[k]) <= Tolerances::vertex_match)
            keep.erase(keep.begin() + static_cast<long>(k));
        else
            ++k;
    }
    P.vertices = keep;
    return P;
}

bool contains(const Polytope& P, const Vec& x, double tol) {
    const int n = static_cast<int>(P.vertices.size());
    if (n == 1) return (x - P.vertices[0]).norm() <= tol;
    if (n == 2) return dist_point_segment(x, P.vertices[0], P.vertices[1]) <= tol;
    if (P.dim == 2) return in_poly2d(P.vertices, x, tol);
    return hull_distance(P.vertices, x) <= tol;
}

Subdivision make_subdivision(int dim, std::vector<Region> regions) {
    if (regions.empty()) throw Error("EmptySubdivision", "no regions");
    Subdivision sub;
    sub.dim = dim;
    sub.regions = std::move(regions);
    sub.box_lo = Vec::Constant(dim, kInf);
    sub.box_hi = Vec::Constant(dim, -kInf);
    for (const auto& r : sub.regions) {
        if (r.weight <= 0.0) throw Error("InvalidWeight", "region weight must be > 0");
        for (const auto& v : r.polytope.vertices) {
            sub.box_lo = sub.box_lo.cwiseMin(v);
            sub.box_hi = sub.box_hi.cwiseMax(v);
        }
    }
    return sub;
}

int AdjacencyGraph::edge_index(int i, int j) const {
    if (i < 0 || i >= m) return -1;
    for (const auto& [nbr, e] : adj[i])
        if (nbr == j) return e;
    return -1;
}

AdjacencyGraph adjacency_graph(const Subdivision& sub, bool facet_only) {
    AdjacencyGraph g;
    g.m = sub.size();
    g.adj.resize(g.m);
    for (int i = 0; i < g.m; ++i) {
        for (int j = i + 1; j < g.m; ++j) {
            std::vector<Vec> common;
            for (const auto& u : sub.regions[i].polytope.vertices)
                for (const auto& v : sub.regions[j].polytope.vertices)
                    if ((u - v).norm() <= Tolerances::vertex_match) {
                        common.push_back(u);
                        break;
                    }
            if (common.empty()) continue;
            Polytope face = make_polytope(sub.dim, common);
            if (facet_only && affine_dim(face) != sub.dim - 1) continue;
            int e = static_cast<int>(g.edges.size());
            g.edges.push_back({i, j, std::move(face)});
            g.adj[i].emplace_back(j, e);
            g.adj[j].emplace_back(i, e);
        }
    }
    for (auto& lst : g.adj) std::sort(lst.begin(), lst.end());
    return g;
}

Subdivision voronoi_subdivision(const std::vector<Vec>& seeds, const Vec& lo,
                                const Vec& hi) {
    if (seeds.size() < 2) throw Error("DuplicateSeeds", "need at least 2 seeds");
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (seeds[i].size() != 2)
            throw Error("DimensionUnsupported", "Voronoi generator is 2-D only");
        if ((seeds[i] - lo).minCoeff() < -Tolerances::vertex_match ||
            (hi - seeds[i]).minCoeff() < -Tolerances::vertex_match)
            throw Error("SeedOutsideBox", "seed " + std::to_string(i) + " outside box");
        for (std::size_t j = i + 1; j < seeds.size(); ++j)
            if ((seeds[i] - seeds[j]).norm() <= Tolerances::vertex_match)
                throw Error("DuplicateSeeds",
                            "seeds " + std::to_string(i) + " and " + std::to_string(j));
    }

    std::vector<Region> regions;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        // start from the box rectangle, CCW
        std::vector<Vec> cell;
        cell.push_back((Vec(2) << lo[0], lo[1]).finished());
        cell.push_back((Vec(2) << hi[0], lo[1]).finished());
        cell.push_back((Vec(2) << hi[0], hi[1]).finished());
        cell.push_back((Vec(2) << lo[0], hi[1]).finished());
        for (std::size_t j = 0; j < seeds.size() && !cell.empty(); ++j) {
            if (j == i) continue;
            // keep the half-plane closer to seed i:  n.x <= n.mid
            Vec n = seeds[j] - seeds[i];
            double rhs = n.dot(0.5 * (seeds[i] + seeds[j]));
            std::vector<Vec> out;
            const int k = static_cast<int>(cell.size());
            for (int a = 0; a < k; ++a) {
                const Vec& cur = cell[a];
                const Vec& nxt = cell[(a + 1) % k];
                double dc = n.dot(cur) - rhs;
                double dn = n.dot(nxt) - rhs;
                if (dc <= 1e-12) out.push_back(cur);
                if ((dc < -1e-12 && dn > 1e-12) || (dc > 1e-12 && dn < -1e-12))
                    out.push_back(cur + (dc / (dc - dn)) * (nxt - cur));
            }
            cell = std::move(out);
        }
        if (cell.size() < 3)
            throw Error("InternalError", "empty Voronoi cell for seed " + std::to_string(i));
        Region r;
        r.polytope = make_polytope(2, cell);
        regions.push_back(std::move(r));
    }
    return make_subdivision(2, std::move(regions));
}

int locate_point(const Subdivision& sub, const Vec& x) {
    for (int i = 0; i < sub.size(); ++i)
        if (contains(sub.regions[i].polytope, x)) return i;
    throw Error("PointOutsideSubdivision", "point not in any region");
}

namespace {

// One marching attempt; throws DegenerateCrossing on low-dimensional hits.
SegmentPath march(const Subdivision& sub, const Vec& a, const Vec& b) {
    SegmentPath out;
    int cur = locate_point(sub, a);
    out.regions.push_back(cur);
    Vec d = b - a;
    double len = d.norm();
    if (len <= Tolerances::vertex_match) return out;
    double t_prev = 0.0;
    std::vector<bool> visited(sub.size(), false);
    visited[cur] = true;

    for (int guard = 0; guard <= sub.size(); ++guard) {
        const Polytope& P = sub.regions[cur].polytope;
        if (contains(P, b)) return out;
        if (affine_dim(P) != 2)
            throw Error("DegenerateCrossing", "marching entered a degenerate region");
        const auto& hull = P.vertices;
        const int n = static_cast<int>(hull.size());
        double t_exit = kInf;
        for (int k = 0; k < n; ++k) {
            const Vec& u = hull[k];
            const Vec& v = hull[(k + 1) % n];
            Vec e = v - u;
            Vec nrm(2);
            nrm << e[1], -e[0];  // outward for CCW
            double nd = nrm.dot(d);
            if (nd <= 1e-14 * nrm.norm() * len) continue;
            double t = (nrm.dot(u) - nrm.dot(a)) / nd;
            if (t >= t_prev - 1e-9) t_exit = std::min(t_exit, t);
        }
        if (t_exit == kInf || t_exit > 1.0 + 1e-9)
            throw Error("DegenerateCrossing", "no forward exit found");
        Vec c = a + t_exit * d;
        for (const auto& v : hull)
            if ((c - v).norm() <= 1e-7)
                throw Error("DegenerateCrossing", "segment exits through a vertex");
        double t_probe = t_exit + 1e-6 / len;
        if (t_probe >= 1.0) {
            // b sits on the outgoing face; stay in the current region
            return out;
        }
        Vec q = a + t_probe * d;
        int next = -1;
        for (int i = 0; i < sub.size(); ++i) {
            if (contains(sub.regions[i].polytope, q)) {
                if (visited[i])
                    throw Error("DegenerateCrossing", "segment re-enters a region");
                next = i;
                break;
            }
        }
        if (next < 0) throw Error("PointOutsideSubdivision", "segment leaves the subdivision");
        out.crossings.push_back(c);
        out.regions.push_back(next);
        visited[next] = true;
        cur = next;
        t_prev = t_exit;
    }
    throw Error("InternalError", "segment marching did not terminate");
}

}  // namespace

SegmentPath segment_induced_path(const Subdivision& sub, const Vec& a, const Vec& b) {
    if (sub.dim != 2)
        throw Error("DimensionUnsupported", "segment marching implemented for d = 2");
    locate_point(sub, b);  // fail fast if b is outside
    Vec target = b;
    for (int attempt = 0;; ++attempt) {
        try {
            return march(sub, a, target);
        } catch (const Error& err) {
            if (err.code() != "DegenerateCrossing" || attempt >= 5) throw;
            // deterministic perturbation: tilt the inward direction by 1 radian
            Vec inward = a - b;
            double s = inward.norm();
            if (s == 0.0) throw;
            inward /= s;
            Vec dir(2);
            dir << std::cos(1.0) * inward[0] - std::sin(1.0) * inward[1],
                std::sin(1.0) * inward[0] + std::cos(1.0) * inward[1];
            target = b + (attempt + 1) * 1e-7 * dir;
        }
    }
}

}  // namespace wrp
