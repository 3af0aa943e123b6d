#pragma once

#include "wrp/model.hpp"
#include "wrp/pnorm.hpp"

#include <vector>

namespace wrp {

// What a norm epigraph compiled into: auxiliary variables and row counts.
// For rational p = q/r with q > r the per-coordinate tower holds at most
// ceil(2*log2(q)) cone rows; p in {1, inf} compiles to linear rows only.
struct ConeBlock {
    std::vector<Index> aux_vars;
    int linear_rows = 0;
    int soc_rows = 0;
    int max_tower_cones = 0;  // cone rows of the largest per-coordinate tower
};

// Emits  z >= ||diff||_p  into m, where diff is a vector of affine
// expressions and z an affine expression (typically a single variable).
ConeBlock add_norm_epigraph(ConicModel& m, const PNorm& p, const std::vector<LinExpr>& diff,
                            const LinExpr& z, const std::string& tag = "");

// Convenience wrapper for plain variable vectors:  z >= ||x - y||_p.
ConeBlock norm_epigraph_block(ConicModel& m, const PNorm& p, const std::vector<Index>& x,
                              const std::vector<Index>& y, Index z, const std::string& tag = "");

// Solves min z s.t. the compiled block with diff fixed to (x - y) for each
// sample pair; returns the max absolute error against direct evaluation.
double verify_block(const PNorm& p, const std::vector<std::pair<Vec, Vec>>& samples);

}  // namespace wrp
