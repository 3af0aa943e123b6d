#pragma once

#include "wrp/common.hpp"

#include <string>
#include <vector>

namespace wrp {

struct LinTerm {
    Index var;
    double coef;
};

// Sparse affine expression  sum coef_k * x_{var_k} + constant.
struct LinExpr {
    std::vector<LinTerm> terms;
    double constant = 0.0;

    LinExpr() = default;
    LinExpr(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)

    LinExpr& add(Index var, double coef) {
        if (coef != 0.0) terms.push_back({var, coef});
        return *this;
    }
    LinExpr& operator+=(const LinExpr& o) {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        constant += o.constant;
        return *this;
    }
    LinExpr& operator-=(const LinExpr& o) {
        for (const auto& t : o.terms) terms.push_back({t.var, -t.coef});
        constant -= o.constant;
        return *this;
    }
    LinExpr& operator*=(double a) {
        for (auto& t : terms) t.coef *= a;
        constant *= a;
        return *this;
    }
    static LinExpr var(Index v, double coef = 1.0) {
        LinExpr e;
        e.add(v, coef);
        return e;
    }
    double eval(const Vec& x) const {
        double s = constant;
        for (const auto& t : terms) s += t.coef * x[t.var];
        return s;
    }
    // Merge duplicate variables, drop zeros, sort by index.
    void compress();
};

enum class RowKind { Eq, Le };  // expr == 0  /  expr <= 0

struct LinearRow {
    LinExpr expr;
    RowKind kind;
    std::string name;
};

// ||(args[1], ..., args[k-1])||_2 <= args[0]
struct SocRow {
    std::vector<LinExpr> args;
    std::string name;
};

// Solver-agnostic conic IR.  Binaries are ordinary [0,1] variables flagged
// binary; the branch-and-bound layer manipulates their bounds.
class ConicModel {
  public:
    Index add_var(const std::string& name, double lb = -kInf, double ub = kInf);
    Index add_nonneg(const std::string& name) { return add_var(name, 0.0, kInf); }
    Index add_binary(const std::string& name);

    void add_eq(LinExpr e, const std::string& name = "");
    void add_le(LinExpr e, const std::string& name = "");     // e <= 0
    void add_soc(SocRow row);
    void set_objective(LinExpr obj) { objective_ = std::move(obj); }
    void add_objective_term(Index var, double coef) { objective_.add(var, coef); }

    Index num_vars() const { return static_cast<Index>(names_.size()); }
    Index num_linear_rows() const { return static_cast<Index>(rows_.size()); }
    Index num_soc_rows() const { return static_cast<Index>(cones_.size()); }
    Index num_binaries() const;

    const std::vector<LinearRow>& linear_rows() const { return rows_; }
    const std::vector<SocRow>& soc_rows() const { return cones_; }
    const LinExpr& objective() const { return objective_; }
    const std::string& var_name(Index v) const { return names_[v]; }
    double lower_bound(Index v) const { return lb_[v]; }
    double upper_bound(Index v) const { return ub_[v]; }
    bool is_binary(Index v) const { return binary_[v]; }
    const std::vector<double>& lower_bounds() const { return lb_; }
    const std::vector<double>& upper_bounds() const { return ub_; }

    void set_bounds(Index v, double lb, double ub) {
        lb_[v] = lb;
        ub_[v] = ub;
    }
    void clear_binary(Index v) { binary_[v] = false; }
    void mark_binary(Index v) { binary_[v] = true; }

    // Violation of all rows and bounds at x (for solution certification).
    double max_linear_violation(const Vec& x) const;
    double max_soc_violation(const Vec& x) const;

  private:
    std::vector<std::string> names_;
    std::vector<double> lb_, ub_;
    std::vector<bool> binary_;
    std::vector<LinearRow> rows_;
    std::vector<SocRow> cones_;
    LinExpr objective_;
};

// Binaries replaced by continuous variables in [0,1]; idempotent.
ConicModel relax(const ConicModel& m);

// Deterministic text dump, one row per line; round-trips bit-exactly
// through parse_dump.
std::string dump(const ConicModel& m);
ConicModel parse_dump(const std::string& text);

}  // namespace wrp
