#include <doctest.h>

#include "k3trace/liegroups.hpp"

using namespace k3trace;

namespace {

std::vector<Rational> ints(std::vector<long> v) {
    std::vector<Rational> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

void check_moments(const std::vector<Rational>& got, const std::vector<long>& want) {
    REQUIRE(got.size() >= want.size());
    for (size_t i = 0; i < want.size(); ++i) {
        CAPTURE(i);
        CHECK(got[i] == Rational(want[i]));
    }
}

}  // namespace

TEST_CASE("trace polynomials") {
    ConnectedBlock so3{BlockKind::SOOdd, 1};
    LaurentPoly t = trace_poly(so3);
    CHECK(t.term_count() == 3);
    CHECK(t.constant_term() == 1);

    ConnectedBlock u3{BlockKind::Unitary, 3};
    CHECK(trace_poly(u3).term_count() == 6);
    CHECK(trace_poly(u3).constant_term() == 0);

    ConnectedBlock so6{BlockKind::SOEven, 3};
    CHECK(trace_poly(so6).term_count() == 6);
}

TEST_CASE("weyl weights") {
    // SO(3): (1-z)(1-1/z) = 2 - z - 1/z
    ConnectedBlock so3{BlockKind::SOOdd, 1};
    LaurentPoly w = weyl_weight(so3);
    CHECK(w.term_count() == 3);
    CHECK(w.constant_term() == 2);

    // U(1): empty product
    ConnectedBlock u1{BlockKind::Unitary, 1};
    CHECK(weyl_weight(u1).constant_term() == 1);
    CHECK(weyl_weight(u1).term_count() == 1);

    // SO(5): four positive roots
    ConnectedBlock so5{BlockKind::SOOdd, 2};
    CHECK(positive_roots(so5).size() == 4);
    CHECK(weyl_order(so5) == 8);
    CHECK(weyl_order(ConnectedBlock{BlockKind::SOEven, 3}) == 24);
    CHECK(weyl_order(ConnectedBlock{BlockKind::Unitary, 3}) == 6);
}

TEST_CASE("moment tables for the connected groups") {
    // SO2 / U1
    check_moments(block_moments({{BlockKind::SOEven, 1}}, 10),
                  {1, 0, 2, 0, 6, 0, 20, 0, 70, 0, 252});
    check_moments(block_moments({{BlockKind::Unitary, 1}}, 10),
                  {1, 0, 2, 0, 6, 0, 20, 0, 70, 0, 252});
    // SO3
    check_moments(block_moments({{BlockKind::SOOdd, 1}}, 10),
                  {1, 0, 1, 1, 3, 6, 15, 36, 91, 232, 603});
    // SO5
    check_moments(block_moments({{BlockKind::SOOdd, 2}}, 10),
                  {1, 0, 1, 0, 3, 1, 15, 15, 105, 190, 945});
    // SO6
    check_moments(block_moments({{BlockKind::SOEven, 3}}, 10),
                  {1, 0, 1, 0, 3, 0, 16, 0, 126, 0, 1296});
    // U3
    check_moments(block_moments({{BlockKind::Unitary, 3}}, 10),
                  {1, 0, 2, 0, 12, 0, 120, 0, 1610, 0, 25956});
}

TEST_CASE("moment tables for products") {
    check_moments(block_moments({{BlockKind::SOOdd, 1}, {BlockKind::SOOdd, 1}}, 10),
                  {1, 0, 2, 2, 12, 32, 140, 534, 2324, 10112, 46008});
    check_moments(
        block_moments({{BlockKind::Unitary, 1}, {BlockKind::Unitary, 1}, {BlockKind::Unitary, 1}}, 10),
        {1, 0, 6, 0, 90, 0, 1860, 0, 44730, 0, 1172556});
}

TEST_CASE("non-neutral O(6) coset moments") {
    check_moments(coset_moments(3, 12), {1, 0, 1, 0, 3, 0, 14, 0, 84, 0, 594, 0, 4719});
    CHECK_THROWS_AS(coset_moments(1, 4), std::invalid_argument);
}

TEST_CASE("moments are integers for the catalogued groups") {
    for (const char* label : {"so3", "so5", "so6", "u3", "so3xso3", "u1cube"}) {
        auto ms = mixture_moments(spec_for_label(label), 12);
        for (const auto& m : ms) CHECK(is_integer(m));
    }
}

TEST_CASE("odd moments vanish where the torus trace is odd") {
    for (const char* label : {"so2", "so6", "u3", "u1cube", "o6minus"}) {
        auto ms = mixture_moments(spec_for_label(label), 11);
        for (size_t n = 1; n < ms.size(); n += 2) {
            CAPTURE(label);
            CHECK(ms[n] == 0);
        }
    }
}

TEST_CASE("binomial convolution consistency against direct constant terms") {
    // two-block product computed directly on the joint torus must equal the
    // convolution of per-block moments
    std::vector<ConnectedBlock> blocks{{BlockKind::SOOdd, 1}, {BlockKind::SOEven, 1}};
    auto conv = block_moments(blocks, 8);
    // direct: joint weight and trace on a rank-2 torus
    LaurentPoly w(2), tr(2);
    {
        LaurentPoly w1 = weyl_weight(blocks[0]);  // vars {0}
        // lift second block's pieces to variable 1
        LaurentPoly tr2(2);
        ExpVec e;
        e[1] = 1;
        tr2.add_term(e, 1);
        e[1] = -1;
        tr2.add_term(e, 1);
        LaurentPoly tr1(2);
        e = ExpVec{};
        e[0] = 1;
        tr1.add_term(e, 1);
        e[0] = -1;
        tr1.add_term(e, 1);
        tr1.add_term(ExpVec{}, 1);  // SO(3) constant
        tr = tr1 + tr2;
        LaurentPoly w2 = LaurentPoly::constant(2, 1);  // SO(2): empty root set
        LaurentPoly w1l(2);
        for (const auto& [ee, c] : w1.terms()) w1l.add_term(ee, c);
        w = w1l * w2;
    }
    BigInt norm = weyl_order(blocks[0]) * weyl_order(blocks[1]);
    LaurentPoly state = w;
    for (int n = 0; n <= 8; ++n) {
        Rational direct(state.constant_term(), norm);
        direct.canonicalize();
        CAPTURE(n);
        CHECK(direct == conv[size_t(n)]);
        state = state * tr;
    }
}

TEST_CASE("Hankel positivity of catalogued moment sequences") {
    // [m_{i+j}] for i, j <= k must have nonnegative determinant (moments of
    // a positive measure)
    auto hankel_det = [](const std::vector<Rational>& m, int k) {
        int n = k + 1;
        std::vector<Rational> a(size_t(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[size_t(i) * n + j] = m[size_t(i + j)];
        // fraction-free-ish Gaussian elimination determinant
        Rational det(1);
        for (int c = 0; c < n; ++c) {
            int piv = -1;
            for (int r = c; r < n; ++r)
                if (a[size_t(r) * n + c] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return Rational(0);
            if (piv != c) {
                for (int j = 0; j < n; ++j)
                    std::swap(a[size_t(piv) * n + j], a[size_t(c) * n + j]);
                det = -det;
            }
            det *= a[size_t(c) * n + c];
            for (int r = c + 1; r < n; ++r) {
                Rational f = a[size_t(r) * n + c] / a[size_t(c) * n + c];
                for (int j = c; j < n; ++j)
                    a[size_t(r) * n + j] -= f * a[size_t(c) * n + j];
            }
        }
        return det;
    };
    for (const char* label : {"so3", "so5", "so6", "u3", "so3xso3", "u1cube", "o6",
                              "x4", "x5", "x7"}) {
        auto ms = mixture_moments(spec_for_label(label), 10);
        for (int k = 1; k <= 5; ++k) {
            CAPTURE(label);
            CAPTURE(k);
            CHECK(hankel_det(ms, k) >= 0);
        }
    }
}

TEST_CASE("component classification is derived from the group element") {
    std::vector<ConnectedBlock> two_so3{{BlockKind::SOOdd, 1}, {BlockKind::SOOdd, 1}};
    // swap with no fixed block: atom
    auto swap_comp = ComponentDescriptor::make(two_so3, {1, 0}, {Twist::Identity, Twist::Identity});
    CHECK(swap_comp.behaviour == TraceBehaviour::AtomAtZero);
    // both reflections: mirrored
    auto mirror = ComponentDescriptor::make(two_so3, {0, 1}, {Twist::Reflection, Twist::Reflection});
    CHECK(mirror.behaviour == TraceBehaviour::Mirrored);
    // the forbidden one-sided reflection
    CHECK_THROWS_AS(ComponentDescriptor::make(two_so3, {0, 1},
                                              {Twist::Reflection, Twist::Identity}),
                    std::invalid_argument);

    std::vector<ConnectedBlock> one_u3{{BlockKind::Unitary, 3}};
    auto uswap = ComponentDescriptor::make(one_u3, {0}, {Twist::Reflection});
    CHECK(uswap.behaviour == TraceBehaviour::AtomAtZero);

    std::vector<ConnectedBlock> one_so6{{BlockKind::SOEven, 3}};
    auto coset = ComponentDescriptor::make(one_so6, {0}, {Twist::Reflection});
    CHECK(coset.behaviour == TraceBehaviour::TwistedCoset);
}

TEST_CASE("catalogued specs have the right component structure") {
    auto x1 = spec_for_label("x1");
    CHECK(x1.components.size() == 2);
    CHECK(x1.atom_mass() == 0);

    auto x4 = spec_for_label("x4");
    CHECK(x4.components.size() == 2);
    CHECK(x4.atom_mass() == Rational(1, 2));

    auto x5 = spec_for_label("x5");
    CHECK(x5.components.size() == 4);
    CHECK(x5.atom_mass() == Rational(1, 2));
    int mirrored = 0;
    for (const auto& c : x5.components)
        if (c.behaviour == TraceBehaviour::Mirrored) ++mirrored;
    CHECK(mirrored == 1);

    auto x6 = spec_for_label("x6");
    CHECK(x6.components.size() == 4);
    CHECK(x6.atom_mass() == Rational(1, 2));

    auto x7 = spec_for_label("x7");
    CHECK(x7.components.size() == 6);
    CHECK(x7.atom_mass() == Rational(5, 6));

    CHECK_THROWS_AS(spec_for_label("so17"), std::invalid_argument);
}

TEST_CASE("mixture moments") {
    // O(6) mixture: average of SO6 and the coset
    auto o6 = mixture_moments(spec_for_label("o6"), 6);
    CHECK(o6[6] == Rational(15));  // (16 + 14)/2
    CHECK(o6[0] == 1);
    CHECK(o6[2] == 1);

    // X5: quarter full + quarter mirrored + half atom
    auto x5 = mixture_moments(spec_for_label("x5"), 3);
    CHECK(x5[0] == 1);
    CHECK(x5[2] == 1);  // (2 + 2)/4
    CHECK(x5[3] == 0);  // odd moments cancel between full and mirrored

    auto x7 = mixture_moments(spec_for_label("x7"), 4);
    CHECK(x7[2] == 1);           // 6/6
    CHECK(x7[4] == Rational(15));  // 90/6

    // moment cap
    CHECK_THROWS_AS(block_moments({{BlockKind::SOOdd, 1}}, kMomentCap + 1),
                    std::length_error);
}
