#pragma once

#include "wrp/common.hpp"

#include <numeric>
#include <string>

namespace wrp {

// Norm exponent p = q/r >= 1 in lowest terms, or infinity.  The exponent
// drives how a norm epigraph is compiled: p in {1, inf} polyhedrally,
// p = 2 as a single second-order cone, other rationals via a cone tower.
class PNorm {
  public:
    static PNorm rational(long q, long r) {
        if (q <= 0 || r <= 0) throw Error("InvalidExponent", "q and r must be positive");
        long g = std::gcd(q, r);
        q /= g;
        r /= g;
        if (q < r) throw Error("InvalidExponent", "p = q/r must be >= 1");
        PNorm n;
        n.q_ = q;
        n.r_ = r;
        return n;
    }
    static PNorm one() { return rational(1, 1); }
    static PNorm two() { return rational(2, 1); }
    static PNorm infinity() {
        PNorm n;
        n.inf_ = true;
        return n;
    }

    bool is_infinity() const { return inf_; }
    bool is_one() const { return !inf_ && q_ == 1; }
    bool is_two() const { return !inf_ && q_ == 2 && r_ == 1; }
    bool is_polyhedral() const { return inf_ || is_one(); }
    bool is_smooth() const { return !is_polyhedral(); }
    long q() const { return q_; }
    long r() const { return r_; }
    double value() const { return inf_ ? kInf : static_cast<double>(q_) / r_; }

    // Dual exponent p/(p-1); 1 <-> inf.
    PNorm dual() const {
        if (inf_) return one();
        if (is_one()) return infinity();
        return rational(q_, q_ - r_);
    }

    bool operator==(const PNorm& o) const {
        return inf_ == o.inf_ && q_ == o.q_ && r_ == o.r_;
    }
    bool operator!=(const PNorm& o) const { return !(*this == o); }

    // Lowest-terms fraction string or "inf"; the instance-file encoding.
    std::string str() const {
        if (inf_) return "inf";
        if (r_ == 1) return std::to_string(q_);
        return std::to_string(q_) + "/" + std::to_string(r_);
    }
    static PNorm parse(const std::string& s);

  private:
    PNorm() = default;
    long q_ = 2, r_ = 1;
    bool inf_ = false;
};

double lp_norm(const Vec& x, const PNorm& p);

// Polar vector of Prop.-4 type: the unique w with ||w||_{p dual} = ||v||_p
// and lp-angle 0 to v.  Requires 1 < p < inf.
Vec polar_vector(const Vec& v, const PNorm& p);

// arccos(v'w / (||v||_p ||w||_{p dual})), in [0, pi].
double lp_angle(const Vec& v, const Vec& w, const PNorm& p);

}  // namespace wrp
