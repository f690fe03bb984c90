#include <doctest.h>

#include "k3trace/ntheory.hpp"

using namespace k3trace;

TEST_CASE("sieve basics") {
    CHECK(sieve_primes(10) == std::vector<uint32_t>{2, 3, 5, 7});
    CHECK(sieve_primes(2) == std::vector<uint32_t>{2});
    CHECK_THROWS_AS(sieve_primes(1), std::domain_error);
}

TEST_CASE("sieve count to 1e5 against trial division") {
    auto primes = sieve_primes(100000);
    CHECK(primes.size() == 9592);
    // independent check on a sample: trial division
    auto trial_prime = [](uint32_t n) {
        if (n < 2) return false;
        for (uint32_t d = 2; uint64_t(d) * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    };
    size_t count = 0;
    for (uint32_t n = 2; n <= 100000; ++n)
        if (trial_prime(n)) ++count;
    CHECK(count == primes.size());
}

TEST_CASE("kronecker symbol conventions") {
    CHECK(kronecker(-1, 5) == 1);
    CHECK(kronecker(-1, 7) == -1);
    CHECK(kronecker(2, 7) == 1);
    CHECK(kronecker(2, 3) == -1);
    CHECK(kronecker(6, 3) == 0);
    CHECK(kronecker(3, 2) == -1);   // (a/2) via a mod 8
    CHECK(kronecker(7, 2) == 1);
    CHECK(kronecker(5, -11) == 1);
    CHECK_THROWS_AS(kronecker(3, 0), std::domain_error);
}

TEST_CASE("kronecker matches Euler criterion for odd primes") {
    // includes the X1 jump character at its good primes
    auto primes = sieve_primes(1000);
    for (uint32_t p : primes) {
        if (p == 2) continue;
        for (int64_t a : {-6006ll, -1ll, 3ll, 14ll, 42ll, -42ll, 10ll}) {
            if (a % p == 0) continue;
            // Euler: a^((p-1)/2) mod p
            int64_t base = ((a % p) + p) % p;
            uint64_t r = 1, b = uint64_t(base), e = (p - 1) / 2;
            while (e) {
                if (e & 1) r = r * b % p;
                b = b * b % p;
                e >>= 1;
            }
            int euler = r == 1 ? 1 : -1;
            CAPTURE(a);
            CAPTURE(p);
            CHECK(kronecker(a, p) == euler);
        }
    }
}

TEST_CASE("prime field character table") {
    Field f7(7);
    CHECK(f7.chi(2) == 1);  // 3^2 = 2 mod 7
    CHECK(f7.chi(0) == 0);
    CHECK(f7.chi(3) == -1);
    CHECK(f7.quadratic_character(f7.from_int(2)) == 1);
}

TEST_CASE("character sum vanishes") {
    for (uint32_t p : {3u, 7u, 31u, 101u}) {
        Field f(p);
        int64_t sum = 0;
        for (uint32_t x = 0; x < p; ++x) sum += f.chi(x);
        CHECK(sum == 0);
    }
}

TEST_CASE("extension field construction") {
    Field f8(2, 3);
    // lexicographically first irreducible cubic over F_2 is x^3 + x + 1
    CHECK(f8.q() == 8);
    CHECK(f8.modulus() == std::vector<uint32_t>{1, 1, 0, 1});

    Field f961(31, 2);
    CHECK(f961.q() == 961);
    // the modulus must be irreducible: no root in F_31
    const auto& m = f961.modulus();
    for (uint32_t x = 0; x < 31; ++x) {
        uint64_t v = (m[0] + uint64_t(m[1]) * x + uint64_t(m[2]) * x % 31 * x) % 31;
        CHECK(v != 0);
    }
    CHECK_THROWS_AS(Field(2, 25), std::invalid_argument);
    CHECK_THROWS_AS(Field(1031, 2), std::length_error);
}

TEST_CASE("field axioms on sampled triples") {
    for (auto [p, k] : {std::pair<uint32_t, uint32_t>{3, 4}, {7, 2}, {31, 2}, {5, 3}}) {
        Field F(p, k);
        uint64_t q = F.q();
        uint64_t step = q / 17 + 1;
        for (uint64_t i = 1; i < q; i += step)
            for (uint64_t j = 1; j < q; j += step) {
                auto a = F.element(i), b = F.element(j), c = F.element((i * 7 + j) % q);
                CHECK(F.index(F.add(F.mul(a, c), F.mul(b, c))) ==
                      F.index(F.mul(F.add(a, b), c)));  // distributivity
                CHECK(F.index(F.mul(F.mul(a, b), c)) == F.index(F.mul(a, F.mul(b, c))));
                CHECK(F.index(F.mul(a, F.inverse(a))) == F.index(F.one()));
            }
    }
}

TEST_CASE("quadratic character in F_49 and multiplicativity") {
    Field F(7, 2);
    CHECK(F.q() == 49);
    // exhaustive square table oracle
    std::vector<int> is_sq(49, 0);
    for (uint64_t i = 1; i < 49; ++i) {
        auto sq = F.mul(F.element(i), F.element(i));
        is_sq[F.index(sq)] = 1;
    }
    size_t nonsquares = 0;
    for (uint64_t i = 1; i < 49; ++i) {
        int expect = is_sq[i] ? 1 : -1;
        CHECK(F.quadratic_character(F.element(i)) == expect);
        if (expect == -1) ++nonsquares;
    }
    CHECK(nonsquares == 24);
    CHECK(F.quadratic_character(F.zero()) == 0);
}

TEST_CASE("multiplicativity exhaustive in fields up to 3^6") {
    for (auto [p, k] : {std::pair<uint32_t, uint32_t>{3, 6}, {5, 2}}) {
        Field F(p, k);
        uint64_t q = F.q();
        // chi(xy) = chi(x) chi(y) on a full cross-section
        uint64_t step = k == 6 ? 13 : 1;
        for (uint64_t i = 1; i < q; i += step)
            for (uint64_t j = 1; j < q; j += step) {
                auto x = F.element(i), y = F.element(j);
                CHECK(F.quadratic_character(F.mul(x, y)) ==
                      F.quadratic_character(x) * F.quadratic_character(y));
            }
    }
}

TEST_CASE("kronecker agrees with prime-field character") {
    for (uint32_t p : {3u, 5u, 13u, 97u}) {
        Field F(p);
        for (int64_t a = 1; a < 25; ++a) {
            if (a % p == 0) continue;
            CHECK(kronecker(a, p) == F.chi(uint64_t(a % p)));
        }
    }
}
