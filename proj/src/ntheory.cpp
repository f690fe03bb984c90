#include "k3trace/ntheory.hpp"

#include <algorithm>
#include <cstring>

namespace k3trace {

std::vector<uint32_t> sieve_primes(uint32_t limit) {
    if (limit < 2) throw std::domain_error("sieve_primes: limit < 2");
    std::vector<bool> comp(limit + 1, false);
    std::vector<uint32_t> out;
    for (uint32_t i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (uint64_t j = uint64_t(i) * i; j <= limit; j += i) comp[j] = true;
        }
    }
    return out;
}

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d : {2ull, 3ull, 5ull, 7ull}) {
        if (n % d == 0) return n == d;
    }
    // deterministic Miller-Rabin for 64-bit
    auto mulmod = [](uint64_t a, uint64_t b, uint64_t m) -> uint64_t {
        return static_cast<uint64_t>((__uint128_t)a * b % m);
    };
    auto powmod = [&](uint64_t a, uint64_t e, uint64_t m) -> uint64_t {
        uint64_t r = 1;
        a %= m;
        while (e) {
            if (e & 1) r = mulmod(r, a, m);
            a = mulmod(a, a, m);
            e >>= 1;
        }
        return r;
    };
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (a % n == 0) continue;
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

int kronecker(int64_t a, int64_t n) {
    if (n == 0) throw std::domain_error("kronecker: n = 0");
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    while ((n & 1) == 0) {
        n >>= 1;
        if ((a & 1) == 0) return 0;
        int64_t m = ((a % 8) + 8) % 8;
        if (m == 3 || m == 5) sign = -sign;
    }
    // Jacobi symbol for odd n > 0
    a %= n;
    if (a < 0) a += n;
    int result = sign;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            int64_t m = n % 8;
            if (m == 3 || m == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

Field::Field(uint32_t p) : p_(p), k_(1), q_(p) {
    if (!is_prime(p)) throw std::invalid_argument("Field: p not prime");
    build_prime_field();
}

Field::Field(uint32_t p, uint32_t k) : p_(p), k_(k) {
    if (!is_prime(p)) throw std::invalid_argument("Field: p not prime");
    if (k < 1 || k > 6) throw std::invalid_argument("Field: k out of range [1,6]");
    q_ = 1;
    for (uint32_t i = 0; i < k; ++i) {
        q_ *= p;
        if (q_ > (1u << 20)) throw std::length_error("Field: p^k exceeds 2^20");
    }
    if (k == 1) {
        build_prime_field();
    } else {
        build_extension();
    }
}

void Field::build_prime_field() {
    modulus_ = {0, 1};
    chi_table_.assign(p_, 0);
    if (p_ == 2) {
        chi_table_[1] = 1;  // every element of F_2 is a square
        return;
    }
    for (uint64_t x = 1; x < p_; ++x) chi_table_[x * x % p_] = 1;
    for (uint32_t x = 1; x < p_; ++x) {
        if (chi_table_[x] == 0) chi_table_[x] = -1;
    }
}

namespace {

// polynomial helpers over F_p, coefficient vectors low-to-high
using Poly = std::vector<uint32_t>;

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod, uint32_t p) {
    std::vector<uint64_t> prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + uint64_t(a[i]) * b[j]) % p;
    }
    size_t k = mod.size() - 1;  // mod is monic degree k
    for (size_t d = prod.size(); d-- > k;) {
        uint64_t c = prod[d];
        if (!c) continue;
        prod[d] = 0;
        for (size_t j = 0; j < k; ++j) {
            uint64_t t = prod[d - k + j] + uint64_t(p - mod[j] % p) % p * c % p;
            prod[d - k + j] = t % p;
        }
    }
    Poly out(k, 0);
    for (size_t i = 0; i < k; ++i) out[i] = uint32_t(prod[i]);
    return out;
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& mod, uint32_t p) {
    Poly r(mod.size() - 1, 0);
    r[0] = 1;
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, mod, p);
        base = poly_mulmod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

bool poly_is_x(const Poly& a) {
    if (a.size() < 2 || a[1] != 1) return false;
    if (a[0] != 0) return false;
    for (size_t i = 2; i < a.size(); ++i)
        if (a[i] != 0) return false;
    return true;
}

Poly poly_gcd(Poly a, Poly b, uint32_t p) {
    auto deg = [](const Poly& f) -> int {
        for (int i = int(f.size()) - 1; i >= 0; --i)
            if (f[i]) return i;
        return -1;
    };
    auto inv_mod_p = [&](uint32_t v) -> uint32_t {
        // Fermat
        uint64_t r = 1, b2 = v, e = p - 2;
        while (e) {
            if (e & 1) r = r * b2 % p;
            b2 = b2 * b2 % p;
            e >>= 1;
        }
        return uint32_t(r);
    };
    while (deg(b) >= 0) {
        int da = deg(a), db = deg(b);
        if (da < db) { std::swap(a, b); continue; }
        uint32_t f = uint64_t(a[da]) * inv_mod_p(b[db]) % p;
        for (int i = 0; i <= db; ++i) {
            uint64_t t = a[da - db + i] + uint64_t(p - uint64_t(f) * b[i] % p);
            a[da - db + i] = uint32_t(t % p);
        }
        // recompute
        while (!a.empty() && a.back() == 0) a.pop_back();
        if (a.empty()) a = {0};
    }
    return a;
}

// Rabin irreducibility test for monic f of degree k over F_p.
bool poly_irreducible(const Poly& f, uint32_t p) {
    uint32_t k = uint32_t(f.size()) - 1;
    Poly x(k, 0);
    if (k >= 2) x[1] = 1;
    // x^(p^k) == x mod f
    Poly t = x;
    for (uint32_t i = 0; i < k; ++i) t = poly_powmod(t, p, f, p);
    if (!poly_is_x(t)) return false;
    // gcd(x^(p^(k/r)) - x, f) == 1 for every prime r | k
    for (uint32_t r : {2u, 3u, 5u}) {
        if (k % r != 0) continue;
        Poly s = x;
        for (uint32_t i = 0; i < k / r; ++i) s = poly_powmod(s, p, f, p);
        // s - x
        Poly d = s;
        if (d.size() < 2) d.resize(2, 0);
        d[1] = (d[1] + p - 1) % p;
        Poly g = poly_gcd(f, d, p);
        int dg = -1;
        for (int i = int(g.size()) - 1; i >= 0; --i)
            if (g[i]) { dg = i; break; }
        if (dg != 0) return false;
    }
    return true;
}

}  // namespace

void Field::build_extension() {
    // lexicographically first monic irreducible of degree k: scan constant
    // coefficients low-to-high across all (c_0, ..., c_{k-1})
    uint64_t count = 1;
    for (uint32_t i = 0; i < k_; ++i) count *= p_;
    for (uint64_t idx = 0; idx < count; ++idx) {
        Poly f(k_ + 1, 0);
        uint64_t t = idx;
        for (uint32_t i = 0; i < k_; ++i) {
            f[i] = uint32_t(t % p_);
            t /= p_;
        }
        f[k_] = 1;
        if (poly_irreducible(f, p_)) {
            modulus_ = f;
            return;
        }
    }
    throw std::runtime_error("Field: no irreducible modulus found");
}

Field::Elem Field::one() const {
    Elem e(k_, 0);
    e[0] = 1;
    return e;
}

Field::Elem Field::from_int(uint64_t v) const {
    Elem e(k_, 0);
    e[0] = uint32_t(v % p_);
    return e;
}

Field::Elem Field::element(uint64_t i) const {
    Elem e(k_, 0);
    for (uint32_t j = 0; j < k_; ++j) {
        e[j] = uint32_t(i % p_);
        i /= p_;
    }
    return e;
}

uint64_t Field::index(const Elem& a) const {
    uint64_t v = 0;
    for (uint32_t j = k_; j-- > 0;) v = v * p_ + a[j];
    return v;
}

bool Field::is_zero(const Elem& a) const {
    for (uint32_t c : a)
        if (c) return false;
    return true;
}

Field::Elem Field::add(const Elem& a, const Elem& b) const {
    Elem r(k_);
    for (uint32_t i = 0; i < k_; ++i) r[i] = (a[i] + b[i]) % p_;
    return r;
}

Field::Elem Field::sub(const Elem& a, const Elem& b) const {
    Elem r(k_);
    for (uint32_t i = 0; i < k_; ++i) r[i] = (a[i] + p_ - b[i]) % p_;
    return r;
}

Field::Elem Field::mul(const Elem& a, const Elem& b) const {
    if (k_ == 1) return {uint32_t(uint64_t(a[0]) * b[0] % p_)};
    return poly_mulmod(a, b, modulus_, p_);
}

Field::Elem Field::pow(Elem a, uint64_t e) const {
    Elem r = one();
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Field::Elem Field::inverse(const Elem& a) const {
    if (is_zero(a)) throw std::domain_error("Field::inverse of zero");
    return pow(a, q_ - 2);
}

int Field::quadratic_character(const Elem& a) const {
    if (is_zero(a)) return 0;
    if (k_ == 1) return chi_table_[a[0]];
    if (p_ == 2) return 1;  // squaring is bijective in char 2
    Elem t = pow(a, (q_ - 1) / 2);
    return t[0] == 1 ? 1 : -1;
}

}  // namespace k3trace
