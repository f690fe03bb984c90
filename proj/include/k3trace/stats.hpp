#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "k3trace/counting.hpp"
#include "k3trace/density.hpp"
#include "k3trace/liegroups.hpp"

namespace k3trace {

/// Trace histogram over the fixed range [-6, 6] split into 300 equal
/// classes; bin b covers [-6 + 0.04 b, -6 + 0.04 (b+1)), the last bin
/// right-closed.
struct Histogram {
    static constexpr double kLo = -6.0, kHi = 6.0;
    static constexpr int kBins = 300;
    std::vector<uint64_t> counts = std::vector<uint64_t>(kBins, 0);
    uint64_t total = 0;

    static int bin_of(double x);
    double frequency(int b) const { return total ? double(counts[b]) / double(total) : 0.0; }
};

/// Throws weil_bound_error if a trace lies outside [-6, 6].
Histogram build_histogram(const std::vector<Rational>& traces);

struct MomentEstimate {
    Rational exact_mean;  // exact rational mean of trace^n
    double mean = 0;
    double se = 0;  // standard error of the mean
};

/// Empirical moments n = 1..K with standard errors. Requires K <= 10 and
/// at least 30 samples.
std::vector<MomentEstimate> empirical_moments(const std::vector<Rational>& traces, int K);

/// (number of exactly-zero traces, exact fraction).
std::pair<uint64_t, Rational> spike_mass(const std::vector<Rational>& traces);

/// Partition of the records by the jump character (Delta/p).
struct ComponentSplit {
    bool trivial = false;            // jump character is a square
    std::vector<Rational> plus, minus;
    uint64_t plus_size = 0, minus_size = 0;
};

ComponentSplit component_split(const SurfaceModel& s, const std::vector<TraceRecord>& recs);

struct ComparisonReport {
    std::string surface_id;
    std::string group_label;
    uint64_t samples = 0;
    std::vector<MomentEstimate> empirical;   // n = 1..K
    std::vector<double> theoretical;         // n = 1..K
    std::vector<double> z;                   // (emp - theo)/se
    uint64_t zero_count = 0;
    double spike_fraction = 0;
    double atom_mass = 0;  // theoretical
    double ks_distance = 0;
    double max_abs_z = 0;
};

/// Quantitative comparison of scanned traces against the theoretical
/// mixture. Throws std::invalid_argument when a trace falls outside the
/// spec's support (wrong spec for the surface).
ComparisonReport compare(const SurfaceModel& s, const std::vector<TraceRecord>& recs,
                         const GroupSpec& spec, int K = 6);

/// Kolmogorov-Smirnov distance between the empirical distribution of the
/// traces and the mixture CDF.
double ks_distance(const std::vector<Rational>& traces, const MixtureCdf& cdf);

}  // namespace k3trace
