#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace wrp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Geometric tolerances used across the library.  Vertex matching is tighter
// than point membership so that face extraction by coordinate comparison
// never merges distinct vertices.
struct Tolerances {
    static constexpr double vertex_match = 1e-9;
    static constexpr double membership = 1e-8;
    static constexpr double interior_sample = 1e-7;
};

// Error with a stable machine-readable code ("DuplicateSeeds", ...).
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

}  // namespace wrp
