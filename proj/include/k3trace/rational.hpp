#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

namespace k3trace {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline BigInt pow_int(const BigInt& b, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Rational pow_rat(const Rational& b, unsigned long e) {
    Rational r(1);
    Rational x = b;
    unsigned long k = e;
    while (k) {
        if (k & 1) r *= x;
        x *= x;
        k >>= 1;
    }
    return r;
}

inline bool is_integer(const Rational& q) {
    return q.get_den() == 1;
}

inline double to_double(const Rational& q) {
    return q.get_d();
}

inline std::string to_string(const BigInt& z) {
    return z.get_str();
}

inline std::string to_string(const Rational& q) {
    return q.get_str();
}

}  // namespace k3trace
