#pragma once

#include <cstdint>
#include <vector>

#include "k3trace/liegroups.hpp"

namespace k3trace {

/// xoshiro256++ with splitmix64 seeding; self-contained so that streams are
/// reproducible across platforms and standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed);

    uint64_t next_u64();
    /// uniform in [0, 1)
    double next_double();
    /// standard normal via Box-Muller
    double next_gaussian();

private:
    uint64_t s_[4];
    double spare_ = 0;
    bool has_spare_ = false;
};

/// Trace of a Haar-random element of SO(n).
double haar_so_trace(Rng& rng, int n);

/// Trace of a Haar-random element of the det = -1 coset of O(n).
double haar_o_minus_trace(Rng& rng, int n);

/// 2 Re Tr of a Haar-random element of U(n).
double haar_u_trace(Rng& rng, int n);

/// Pseudorandom trace samples from the spec's Haar measure: a component is
/// chosen uniformly, then sampled. Deterministic for fixed seed.
std::vector<double> monte_carlo_traces(const GroupSpec& spec, size_t count, uint64_t seed);

}  // namespace k3trace
