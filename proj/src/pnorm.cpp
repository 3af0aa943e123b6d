#include "wrp/pnorm.hpp"

#include <cmath>

namespace wrp {

PNorm PNorm::parse(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF") return infinity();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            // Accept a decimal like "1.5" for convenience; must be exactly
            // representable as a small fraction.
            auto dot = s.find('.');
            if (dot == std::string::npos) return rational(std::stol(s), 1);
            double v = std::stod(s);
            for (long r = 1; r <= 64; ++r) {
                double qd = v * r;
                if (std::abs(qd - std::round(qd)) < 1e-12)
                    return rational(static_cast<long>(std::llround(qd)), r);
            }
            throw Error("InvalidExponent", "cannot express " + s + " as q/r");
        }
        return rational(std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw Error("InvalidExponent", "bad exponent string: " + s);
    }
}

double lp_norm(const Vec& x, const PNorm& p) {
    if (p.is_infinity()) return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
    if (p.is_one()) return x.cwiseAbs().sum();
    if (p.is_two()) return x.stableNorm();
    double pv = p.value();
    double scale = x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    // Scale out the largest entry so that pow never overflows.
    double acc = 0.0;
    for (Index k = 0; k < x.size(); ++k) acc += std::pow(std::abs(x[k]) / scale, pv);
    return scale * std::pow(acc, 1.0 / pv);
}

Vec polar_vector(const Vec& v, const PNorm& p) {
    if (p.is_polyhedral())
        throw Error("InvalidExponent", "polar vector requires 1 < p < inf");
    double n = lp_norm(v, p);
    if (n == 0.0) return Vec::Zero(v.size());
    double pv = p.value();
    Vec w(v.size());
    for (Index k = 0; k < v.size(); ++k) {
        double m = std::abs(v[k]) / n;
        w[k] = std::pow(m, pv - 1.0) * (v[k] > 0 ? 1.0 : (v[k] < 0 ? -1.0 : 0.0)) * n;
    }
    return w;
}

double lp_angle(const Vec& v, const Vec& w, const PNorm& p) {
    if (p.is_polyhedral())
        throw Error("InvalidExponent", "lp-angle requires 1 < p < inf");
    double nv = lp_norm(v, p);
    double nw = lp_norm(w, p.dual());
    if (nv == 0.0 || nw == 0.0) throw Error("ZeroVector", "lp-angle of zero vector");
    double c = v.dot(w) / (nv * nw);
    // Hoelder guarantees |c| <= 1; clamp rounding noise only.
    if (c > 1.0) {
        if (c > 1.0 + 1e-12) throw Error("InternalError", "cosine argument exceeds 1");
        c = 1.0;
    } else if (c < -1.0) {
        if (c < -1.0 - 1e-12) throw Error("InternalError", "cosine argument below -1");
        c = -1.0;
    }
    return std::acos(c);
}

}  // namespace wrp
