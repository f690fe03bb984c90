#include "k3trace/laurent.hpp"

#include <cmath>
#include <cstdlib>

namespace k3trace {

LaurentPoly LaurentPoly::constant(int vars, const BigInt& c) {
    LaurentPoly p(vars);
    if (c != 0) p.terms_.emplace(ExpVec{}, c);
    return p;
}

LaurentPoly LaurentPoly::monomial(int vars, const ExpVec& e, const BigInt& c) {
    LaurentPoly p(vars);
    if (c != 0) p.terms_.emplace(e, c);
    return p;
}

void LaurentPoly::add_term(const ExpVec& e, const BigInt& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (c != 0) terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    const LaurentPoly& small = term_count() <= o.term_count() ? *this : o;
    const LaurentPoly& large = term_count() <= o.term_count() ? o : *this;
    LaurentPoly r(vars_);
    r.terms_.reserve(large.term_count() * 2);
    BigInt prod;
    for (const auto& [e1, c1] : small.terms_) {
        for (const auto& [e2, c2] : large.terms_) {
            prod = c1 * c2;
            r.add_term(e1 + e2, prod);
        }
    }
    return r;
}

BigInt LaurentPoly::constant_term() const {
    auto it = terms_.find(ExpVec{});
    return it == terms_.end() ? BigInt(0) : it->second;
}

BigInt LaurentPoly::coefficient(const ExpVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? BigInt(0) : it->second;
}

double LaurentPoly::eval_angles(const double* theta) const {
    double sum = 0;
    for (const auto& [e, c] : terms_) {
        double ang = 0;
        for (int i = 0; i < vars_; ++i) ang += e[i] * theta[i];
        sum += c.get_d() * std::cos(ang);
    }
    return sum;
}

int LaurentPoly::degree_range(int i) const {
    int m = 0;
    for (const auto& [e, c] : terms_) {
        (void)c;
        m = std::max(m, std::abs(int(e[i])));
    }
    return m;
}

}  // namespace k3trace
