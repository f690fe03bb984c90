#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace k3trace {

/// All primes <= limit, by sieve of Eratosthenes.
/// Throws std::domain_error for limit < 2.
std::vector<uint32_t> sieve_primes(uint32_t limit);

bool is_prime(uint64_t n);

/// Kronecker symbol (a/n) with the standard conventions for n = 2 and
/// negative arguments. Throws std::domain_error for n = 0.
int kronecker(int64_t a, int64_t n);

/// Arithmetic in F_q, q = p^k. For k = 1 elements are residues mod p and the
/// quadratic character is a precomputed table (the point-counting loop hits
/// it ~q^2 times). For k > 1 elements are polynomials modulo the
/// lexicographically smallest monic irreducible of degree k, and the
/// character is computed as x^((q-1)/2).
class Field {
public:
    /// Prime field F_p.
    explicit Field(uint32_t p);

    /// Extension field F_{p^k}; requires 1 <= k <= 6 and p^k <= 2^20.
    Field(uint32_t p, uint32_t k);

    uint32_t p() const { return p_; }
    uint32_t k() const { return k_; }
    uint64_t q() const { return q_; }

    /// Monic modulus coefficients c[0..k], c[k] = 1. For k = 1 this is {0, 1}
    /// (the identity convention: elements are residues mod p).
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    using Elem = std::vector<uint32_t>;  // coefficients, degree < k

    Elem zero() const { return Elem(k_, 0); }
    Elem one() const;
    Elem from_int(uint64_t v) const;  // constant polynomial, v mod p
    /// Element with index i in [0, q): base-p digits of i are coefficients.
    Elem element(uint64_t i) const;
    uint64_t index(const Elem& a) const;

    bool is_zero(const Elem& a) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(Elem a, uint64_t e) const;
    Elem inverse(const Elem& a) const;

    /// Quadratic character: 0 for zero, +1 for nonzero squares, -1 otherwise.
    int quadratic_character(const Elem& a) const;

    /// Fast path for k = 1: character of a residue.
    int chi(uint64_t residue) const {
        return chi_table_[residue];
    }

private:
    void build_prime_field();
    void build_extension();

    uint32_t p_;
    uint32_t k_;
    uint64_t q_;
    std::vector<uint32_t> modulus_;
    std::vector<int8_t> chi_table_;  // k = 1 only, size p
};

}  // namespace k3trace
