#pragma once

#include "wrp/model.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace wrp {

using SpMat = Eigen::SparseMatrix<double>;

enum class SolveStatus { Optimal, Infeasible, NumericalTrouble };

struct RelaxSolution {
    SolveStatus status = SolveStatus::NumericalTrouble;
    Vec x;                      // primal values per model variable
    double objective = 0.0;
    double max_lin_violation = 0.0;
    double max_soc_violation = 0.0;
    int iterations = 0;
    Vec dual_y, dual_z;         // Farkas-type certificate when Infeasible
    std::string message;
};

struct IpmOptions {
    int max_iters = 200;
    double feastol = 1e-8;
    double abstol = 1e-8;
    double reltol = 1e-8;
    bool verbose = false;
};

// Cone layout of the standard form: nonnegative orthant of size l followed
// by second-order cones of the given dimensions.
struct ConeDims {
    int l = 0;
    std::vector<int> soc;
    int total() const {
        int t = l;
        for (int k : soc) t += k;
        return t;
    }
    // barrier degree
    int nu() const { return l + static_cast<int>(soc.size()); }
};

//   min c'x + obj_const   s.t.  A x = b,  h - G x in K
struct StandardForm {
    int n = 0;
    SpMat A, G;
    Vec b, h, c;
    double obj_const = 0.0;
    ConeDims dims;
};

StandardForm to_standard_form(const ConicModel& m);

// Primal-dual path-following interior-point solve of the continuous
// linear+SOC program on the homogeneous self-dual embedding, with
// Mehrotra-style predictor-corrector steps and Nesterov-Todd scaling.
RelaxSolution solve_relaxation(const ConicModel& m, const IpmOptions& opts = {});

// Solve in standard form (exposed for the solver's own tests).
struct ConicResult {
    SolveStatus status;
    Vec x, y, z, s;
    double pobj = 0.0;
    int iterations = 0;
    std::string message;
};
ConicResult solve_standard(const StandardForm& sf, const IpmOptions& opts = {});

}  // namespace wrp
