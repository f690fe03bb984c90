#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>

#include "k3trace/rational.hpp"

namespace k3trace {

/// Exponent vector of a Laurent monomial, up to 4 torus variables.
struct ExpVec {
    std::array<int16_t, 4> e{0, 0, 0, 0};

    int16_t& operator[](size_t i) { return e[i]; }
    int16_t operator[](size_t i) const { return e[i]; }
    bool operator==(const ExpVec& o) const { return e == o.e; }

    ExpVec operator+(const ExpVec& o) const {
        ExpVec r;
        for (size_t i = 0; i < 4; ++i) r.e[i] = int16_t(e[i] + o.e[i]);
        return r;
    }
    ExpVec operator-() const {
        ExpVec r;
        for (size_t i = 0; i < 4; ++i) r.e[i] = int16_t(-e[i]);
        return r;
    }
    bool is_zero() const { return e == std::array<int16_t, 4>{0, 0, 0, 0}; }
};

struct ExpVecHash {
    size_t operator()(const ExpVec& v) const {
        uint64_t h = 0;
        for (int16_t x : v.e) h = h * 0x100000001b3ull ^ uint16_t(x);
        return size_t(h);
    }
};

/// Multivariate Laurent polynomial with exact integer coefficients.
/// No zero coefficients are stored.
class LaurentPoly {
public:
    explicit LaurentPoly(int vars = 1) : vars_(vars) {}

    static LaurentPoly constant(int vars, const BigInt& c);
    static LaurentPoly monomial(int vars, const ExpVec& e, const BigInt& c = 1);

    int vars() const { return vars_; }
    size_t term_count() const { return terms_.size(); }
    const std::unordered_map<ExpVec, BigInt, ExpVecHash>& terms() const { return terms_; }

    void add_term(const ExpVec& e, const BigInt& c);

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;

    /// Coefficient of the zero exponent vector.
    BigInt constant_term() const;

    BigInt coefficient(const ExpVec& e) const;

    /// Evaluate at angles theta: sum of c_e * cos(<e, theta>) folding
    /// conjugate pairs (valid for the symmetric polynomials used here,
    /// where the imaginary parts cancel).
    double eval_angles(const double* theta) const;

    /// Maximum |exponent| of variable i across terms.
    int degree_range(int i) const;

private:
    int vars_;
    std::unordered_map<ExpVec, BigInt, ExpVecHash> terms_;
};

}  // namespace k3trace
