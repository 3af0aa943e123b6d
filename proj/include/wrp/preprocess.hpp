#pragma once

#include "wrp/solver.hpp"

#include <vector>

namespace wrp {

struct EliminationList {
    double upper_bound = kInf;        // heuristic incumbent used for the cutoff
    std::vector<int> processed;       // region indices solved, farthest first
    std::vector<double> bounds;       // relaxation bound per processed region
    std::vector<int> eliminated;      // regions no optimal solution can use
};

// Ranks regions by the detour distance min_{x in P_i} (|x_s-x| + |x-x_t|)
// descending, solves the disaggregated relaxation with a forced visit for the
// top m_star of them, and eliminates those whose bound exceeds the heuristic
// path value by more than a relative 1e-6 safety margin.  A region whose
// relaxation fails numerically is never eliminated.
EliminationList preprocess_spp(const SppInstance& inst, int m_star);

// Weber analogue: ranks by min_{x in P_i} sum_l |x_l - x|, forces the
// facility into the region (u_i = 1), cutoff from routing every demand to the
// euclidean median.
EliminationList preprocess_locp(const WeberInstance& inst, int m_star);

// Rebuilds the instance without the eliminated regions, so their variables
// and cones disappear from the models entirely.  keep[i] maps new region
// indices back to the original ones.
struct ShrunkSpp {
    SppInstance inst;
    std::vector<int> keep;
};
ShrunkSpp shrink_spp(const SppInstance& inst, const std::vector<int>& eliminated);

// Applies an elimination list to a built model.  For the path problem the
// arc selectors touching eliminated regions are zeroed; for the location
// problem only the facility selectors are (routes may still cross P_i).
void apply_eliminations(ConicModel& m, const VariableAtlas& atlas,
                        const std::vector<Arc>& arcs, const std::vector<int>& eliminated);

}  // namespace wrp
