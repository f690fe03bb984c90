#include "k3trace/montecarlo.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace k3trace {

namespace {

uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
}

uint64_t Rng::next_u64() {
    uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1, u2;
    do {
        u1 = next_double();
    } while (u1 <= 0);
    u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2 * M_PI * u2);
}

namespace {

constexpr int kMaxDim = 8;

/// Gram-Schmidt a Gaussian matrix into a Haar orthogonal Q (columns).
/// Returns sign of det Q.
int haar_orthogonal(Rng& rng, int n, double Q[][kMaxDim]) {
    double A[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A[i][j] = rng.next_gaussian();
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                double dot = 0;
                for (int i = 0; i < n; ++i) dot += A[i][j] * Q[i][k];
                for (int i = 0; i < n; ++i) A[i][j] -= dot * Q[i][k];
            }
        }
        double nrm = 0;
        for (int i = 0; i < n; ++i) nrm += A[i][j] * A[i][j];
        nrm = std::sqrt(nrm);
        for (int i = 0; i < n; ++i) Q[i][j] = A[i][j] / nrm;
    }
    // det sign by LU with partial pivoting
    double M[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M[i][j] = Q[i][j];
    int sign = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(M[r][c]) > std::fabs(M[p][c])) p = r;
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(M[p][j], M[c][j]);
            sign = -sign;
        }
        if (M[c][c] < 0) sign = -sign;
        for (int r = c + 1; r < n; ++r) {
            double f = M[r][c] / M[c][c];
            for (int j = c; j < n; ++j) M[r][j] -= f * M[c][j];
        }
    }
    return sign;
}

double orthogonal_coset_trace(Rng& rng, int n, int want_det) {
    double Q[kMaxDim][kMaxDim];
    int sign = haar_orthogonal(rng, n, Q);
    // right-translation by diag(-1,1,...,1) maps one coset onto the other
    // and preserves Haar, so flipping the first column conditions on det.
    double tr = 0;
    for (int i = 0; i < n; ++i) tr += Q[i][i];
    if (sign != want_det) tr -= 2 * Q[0][0];
    return tr;
}

}  // namespace

double haar_so_trace(Rng& rng, int n) { return orthogonal_coset_trace(rng, n, +1); }

double haar_o_minus_trace(Rng& rng, int n) { return orthogonal_coset_trace(rng, n, -1); }

double haar_u_trace(Rng& rng, int n) {
    std::complex<double> A[kMaxDim][kMaxDim], Q[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A[i][j] = {rng.next_gaussian(), rng.next_gaussian()};
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                std::complex<double> dot = 0;
                for (int i = 0; i < n; ++i) dot += std::conj(Q[i][k]) * A[i][j];
                for (int i = 0; i < n; ++i) A[i][j] -= dot * Q[i][k];
            }
        }
        double nrm = 0;
        for (int i = 0; i < n; ++i) nrm += std::norm(A[i][j]);
        nrm = std::sqrt(nrm);
        for (int i = 0; i < n; ++i) Q[i][j] = A[i][j] / nrm;
    }
    std::complex<double> tr = 0;
    for (int i = 0; i < n; ++i) tr += Q[i][i];
    return 2 * tr.real();
}

namespace {

double sample_block_trace(Rng& rng, const ConnectedBlock& b) {
    switch (b.kind) {
        case BlockKind::SOOdd: return haar_so_trace(rng, 2 * b.rank + 1);
        case BlockKind::SOEven: return haar_so_trace(rng, 2 * b.rank);
        case BlockKind::Unitary: return haar_u_trace(rng, b.rank);
    }
    return 0;
}

}  // namespace

std::vector<double> monte_carlo_traces(const GroupSpec& spec, size_t count, uint64_t seed) {
    if (count < 1) throw std::invalid_argument("monte_carlo_traces: count < 1");
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(count);
    size_t ncomp = spec.coset_only ? 1 : spec.components.size();
    for (size_t s = 0; s < count; ++s) {
        TraceBehaviour tb;
        if (spec.coset_only) {
            tb = TraceBehaviour::TwistedCoset;
        } else {
            size_t ci = size_t(rng.next_double() * double(ncomp));
            if (ci >= ncomp) ci = ncomp - 1;
            tb = spec.components[ci].behaviour;
        }
        double tr = 0;
        switch (tb) {
            case TraceBehaviour::Full:
                for (const auto& b : spec.blocks) tr += sample_block_trace(rng, b);
                break;
            case TraceBehaviour::Mirrored:
                for (const auto& b : spec.blocks) tr += sample_block_trace(rng, b);
                tr = -tr;
                break;
            case TraceBehaviour::AtomAtZero:
                tr = 0;
                break;
            case TraceBehaviour::TwistedCoset:
                tr = haar_o_minus_trace(rng, 2 * spec.blocks[0].rank);
                break;
        }
        out.push_back(tr);
    }
    return out;
}

}  // namespace k3trace
