#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wrp/pnorm.hpp"

#include <cmath>

using namespace wrp;

namespace {
Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}
}  // namespace

TEST_CASE("parse and print") {
    CHECK(PNorm::parse("2") == PNorm::two());
    CHECK(PNorm::parse("1") == PNorm::one());
    CHECK(PNorm::parse("inf").is_infinity());
    CHECK(PNorm::parse("3/2") == PNorm::rational(3, 2));
    CHECK(PNorm::parse("1.5") == PNorm::rational(3, 2));
    CHECK(PNorm::parse("6/4") == PNorm::rational(3, 2));
    CHECK(PNorm::parse("3/2").str() == "3/2");
    CHECK(PNorm::parse("3").str() == "3");
    CHECK(PNorm::infinity().str() == "inf");
    CHECK_THROWS_AS(PNorm::parse("0.5"), Error);
    CHECK_THROWS_AS(PNorm::parse("junk"), Error);
}

TEST_CASE("classification") {
    CHECK(PNorm::one().is_polyhedral());
    CHECK(PNorm::infinity().is_polyhedral());
    CHECK(PNorm::two().is_smooth());
    CHECK(PNorm::rational(3, 2).is_smooth());
    CHECK(PNorm::rational(4, 2) == PNorm::two());
}

TEST_CASE("dual exponent") {
    CHECK(PNorm::two().dual() == PNorm::two());
    CHECK(PNorm::one().dual().is_infinity());
    CHECK(PNorm::infinity().dual() == PNorm::one());
    CHECK(PNorm::rational(3, 2).dual() == PNorm::rational(3, 1));
    CHECK(PNorm::rational(3, 1).dual() == PNorm::rational(3, 2));
    CHECK(PNorm::rational(5, 3).dual() == PNorm::rational(5, 2));
}

TEST_CASE("norm evaluation") {
    CHECK(lp_norm(vec2(3, 4), PNorm::two()) == doctest::Approx(5.0));
    CHECK(lp_norm(vec2(3, -4), PNorm::one()) == doctest::Approx(7.0));
    CHECK(lp_norm(vec2(3, -4), PNorm::infinity()) == doctest::Approx(4.0));
    CHECK(lp_norm(vec2(1, 1), PNorm::rational(3, 2)) ==
          doctest::Approx(std::pow(2.0, 2.0 / 3.0)));
    CHECK(lp_norm(vec3(1, 2, 2), PNorm::rational(3, 1)) ==
          doctest::Approx(std::cbrt(17.0)));
    CHECK(lp_norm(Vec::Zero(3), PNorm::rational(3, 2)) == 0.0);
}

TEST_CASE("norm evaluation survives extreme scales") {
    Vec big = vec2(1e200, 1e200);
    CHECK(lp_norm(big, PNorm::two()) == doctest::Approx(1e200 * std::sqrt(2.0)));
    Vec tiny = vec2(1e-200, 1e-200);
    CHECK(lp_norm(tiny, PNorm::rational(3, 1)) ==
          doctest::Approx(1e-200 * std::cbrt(2.0)));
}

TEST_CASE("polar vector identities") {
    // v° satisfies ||v°||_{p°} = ||v||_p and v°'v = ||v||_p^2 (Hoelder equality).
    for (auto p : {PNorm::rational(3, 2), PNorm::two(), PNorm::rational(3, 1),
                   PNorm::rational(5, 3)}) {
        Vec v = vec3(1.0, -2.5, 0.75);
        Vec w = polar_vector(v, p);
        double nv = lp_norm(v, p);
        CHECK(lp_norm(w, p.dual()) == doctest::Approx(nv));
        CHECK(w.dot(v) == doctest::Approx(nv * nv));
        CHECK(lp_angle(v, w, p) <= 1e-6);  // acos turns eps into sqrt(eps)
    }
    CHECK(polar_vector(Vec::Zero(2), PNorm::two()).norm() == 0.0);
    CHECK_THROWS_AS(polar_vector(vec2(1, 1), PNorm::one()), Error);
    CHECK_THROWS_AS(polar_vector(vec2(1, 1), PNorm::infinity()), Error);
}

TEST_CASE("polar of the polar recovers the direction") {
    Vec v = vec3(2.0, -1.0, 0.5);
    for (auto p : {PNorm::rational(3, 2), PNorm::rational(4, 3)}) {
        Vec w = polar_vector(polar_vector(v, p), p.dual());
        CHECK((w - v).norm() == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("lp angle") {
    CHECK(lp_angle(vec2(1, 0), vec2(0, 1), PNorm::two()) ==
          doctest::Approx(M_PI / 2));
    CHECK(lp_angle(vec2(1, 0), vec2(-1, 0), PNorm::two()) == doctest::Approx(M_PI));
    CHECK_THROWS_AS(lp_angle(Vec::Zero(2), vec2(1, 0), PNorm::two()), Error);
}
