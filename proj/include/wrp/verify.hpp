#pragma once

#include "wrp/formulations.hpp"
#include "wrp/instance.hpp"

#include <vector>

namespace wrp {

// The face of F whose relative interior contains b: vertices of F that carry
// a strictly positive scalar in some convex representation of b.
Polytope active_face(const Polytope& F, const Vec& b);

// One gate of a piecewise-linear path: incoming breakpoint a in P_i, gate b
// on the shared face, outgoing breakpoint c in P_j.
struct GateContext {
    Vec a, b, c;
    Polytope active;  // face of F_ij with b in its relative interior
    Mat basis;        // orthonormal basis of the direction space of aff(active)
};

GateContext make_gate_context(const Polytope& face, const Vec& a, const Vec& b, const Vec& c);

// Scaled refraction residual: the weighted polar directions of the incoming
// and outgoing rays must agree along every tangent direction of the active
// face.  Zero by convention at a vertex face; smooth exponents only.
double snell_residual(const GateContext& ctx, const PNorm& pi, const PNorm& pj, double wi,
                      double wj);

struct GateCheck {
    double snell = 0.0;        // residual, -1 when not applicable (vertex or p in {1,inf})
    double improvement = 0.0;  // value gained by re-minimizing this gate alone
};

struct VerifyReport {
    std::vector<GateCheck> gates;
    double max_snell = 0.0;
    double max_improvement = 0.0;
    bool passed = false;
};

// Checks every gate of a decoded path: refraction balance where the
// surrounding exponents are smooth, and single-gate re-minimization
// everywhere.
VerifyReport verify_path_optimality(const SppInstance& inst, const PathSolution& sol,
                                    double tol = 1e-5);

// Newton refinement of the gates along their faces, cycling until no gate
// moves.  Only gates between smooth-exponent regions whose refined position
// stays on the face are touched; the path value is recomputed at the end.
void polish_gates(const SppInstance& inst, PathSolution& sol, int sweeps = 8);

// Continuous relaxation values (aggregated, disaggregated); throws if the
// dominance inequality fails.
std::pair<double, double> dominance_check_spp(const SppInstance& inst);
std::pair<double, double> dominance_check_locp(const WeberInstance& inst);

struct TriangleDemo {
    double d_st = 0.0, d_su = 0.0, d_ut = 0.0;
    bool violated = false;  // d_st > d_su + d_ut
};

// The three-strip l1 instance whose geodesic distance violates the triangle
// inequality: D(s,t) = 54 > 16 + 16 = D(s,u) + D(u,t).
TriangleDemo triangle_violation_demo();

}  // namespace wrp
