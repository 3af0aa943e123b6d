#pragma once

#include "wrp/instance.hpp"
#include "wrp/model.hpp"

#include <vector>

namespace wrp {

// Product-splitting variables for one ordered arc pair (h,i),(i,j).
struct PairVars {
    int in_arc, out_arc;
    Index rho = -1;
    std::vector<Index> phi;  // per e in Ext(F_hi)
    std::vector<Index> psi;  // per e in Ext(F_ij)
};

// Facility-arrival splitting for one incoming arc (h,i) of the Weber problem.
struct FacilityArrival {
    int in_arc;
    std::vector<Index> theta;    // per e in Ext(P_i)
    std::vector<Index> upsilon;  // per e in Ext(F_hi)
};

// Variables of one commodity: the single s-t flow for the shortest path
// problem, or the flow of one demand point for the location problem.
struct PathVars {
    std::vector<Index> z;                    // per arc
    std::vector<std::vector<Index>> lambda;  // per arc, per e in Ext(F_ij)
    std::vector<Index> d;                    // per region
    std::vector<std::vector<PairVars>> pairs;             // per region (disaggregated)
    std::vector<std::vector<FacilityArrival>> arrivals;   // per region (Weber, disaggregated)
};

struct VariableAtlas {
    std::vector<PathVars> flows;         // one entry (SPP) or one per demand (LocP)
    std::vector<Index> u;                // facility region selector (LocP)
    std::vector<std::vector<Index>> mu;  // per region, per e in Ext(P_i) (LocP)
};

struct BuiltModel {
    ConicModel model;
    VariableAtlas atlas;
};

// Closed-form value when source and target share a region.
double spp_trivial_value(const SppInstance& inst);

// Aggregated formulation: one norm epigraph per region.
BuiltModel build_spp_f1(const SppInstance& inst);
// Disaggregated formulation: one norm term per arc (at s, t) and per arc
// pair at intermediate regions; tighter continuous relaxation.
BuiltModel build_spp_f2(const SppInstance& inst);

BuiltModel build_locp_f1(const WeberInstance& inst);
BuiltModel build_locp_f2(const WeberInstance& inst);

struct PathSolution {
    double value = 0.0;
    std::vector<int> path;   // region indices from s to t
    std::vector<Vec> gates;  // one gate per traversed arc
};

struct WeberSolution {
    double value = 0.0;
    int facility_region = -1;
    Vec facility;
    std::vector<PathSolution> routes;  // one per demand (empty path if co-located)
};

// Follows arcs with z >= 0.5 from s and reads the gates off the lambda
// scalars; a chain that does not reach t is a solver error.
PathSolution decode_spp(const SppInstance& inst, const VariableAtlas& atlas, const Vec& x,
                        double objective);
WeberSolution decode_locp(const WeberInstance& inst, const VariableAtlas& atlas, const Vec& x,
                          double objective);

// Norm and weight attached to a shared face acting as a travel medium.
struct FaceSpec {
    PNorm p = PNorm::two();
    double weight = 1.0;
};

// Expands every shared face into a region of its own (one FaceSpec per edge
// of inst.graph, same order); region-region edges are replaced by
// region-face edges so paths may run along the boundaries.
SppInstance rapid_transit_transform(const SppInstance& inst,
                                    const std::vector<FaceSpec>& faces);

// Duplicates every region so each may be visited up to twice; copies i and
// m+i are never adjacent to each other.
SppInstance double_visit_transform(const SppInstance& inst);

}  // namespace wrp
