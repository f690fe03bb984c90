#include <doctest.h>

#include <cmath>

#include "k3trace/laurent.hpp"

using namespace k3trace;

namespace {

LaurentPoly zvar(int vars, int i, int e = 1) {
    ExpVec v;
    v[size_t(i)] = int16_t(e);
    return LaurentPoly::monomial(vars, v);
}

}  // namespace

TEST_CASE("no zero coefficients are stored") {
    LaurentPoly p = zvar(1, 0) + zvar(1, 0, -1);
    LaurentPoly q = p - p;
    CHECK(q.term_count() == 0);
    CHECK(q.constant_term() == 0);
}

TEST_CASE("multiplication and constant term") {
    // (z + 1/z)^2 = z^2 + 2 + 1/z^2
    LaurentPoly p = zvar(1, 0) + zvar(1, 0, -1);
    LaurentPoly sq = p * p;
    CHECK(sq.term_count() == 3);
    CHECK(sq.constant_term() == 2);
    ExpVec e;
    e[0] = 2;
    CHECK(sq.coefficient(e) == 1);

    // constant term of (z + 1/z)^(2n) is binomial(2n, n)
    LaurentPoly pow = LaurentPoly::constant(1, 1);
    for (int i = 0; i < 10; ++i) pow = pow * p;
    CHECK(pow.constant_term() == binomial(10, 5));
}

TEST_CASE("two-variable products commute and distribute") {
    LaurentPoly a = zvar(2, 0) + zvar(2, 1, -1);
    LaurentPoly b = zvar(2, 1, 2) + LaurentPoly::constant(2, -3);
    LaurentPoly c = zvar(2, 0, -1);
    auto lhs = (a + b) * c;
    auto rhs = a * c + b * c;
    CHECK((lhs - rhs).term_count() == 0);
    CHECK(((a * b) - (b * a)).term_count() == 0);
}

TEST_CASE("degree range") {
    LaurentPoly p = zvar(2, 0, 3) + zvar(2, 1, -5);
    CHECK(p.degree_range(0) == 3);
    CHECK(p.degree_range(1) == 5);
}

TEST_CASE("angle evaluation matches cosine expansion") {
    // z + 1/z at angle t is 2 cos t
    LaurentPoly p = zvar(1, 0) + zvar(1, 0, -1);
    double t = 0.7;
    CHECK(p.eval_angles(&t) == doctest::Approx(2 * std::cos(0.7)));
}
