#include "k3trace/stats.hpp"

#include <algorithm>
#include <cmath>

namespace k3trace {

int Histogram::bin_of(double x) {
    int b = int((x - kLo) / 0.04);
    if (b == kBins && x <= kHi) b = kBins - 1;  // right-closed last bin
    return b;
}

Histogram build_histogram(const std::vector<Rational>& traces) {
    Histogram h;
    for (const Rational& t : traces) {
        double x = t.get_d();
        if (x < Histogram::kLo || x > Histogram::kHi)
            throw weil_bound_error("histogram: trace outside [-6, 6]");
        int b = Histogram::bin_of(x);
        h.counts[b] += 1;
        h.total += 1;
    }
    return h;
}

std::vector<MomentEstimate> empirical_moments(const std::vector<Rational>& traces, int K) {
    if (K > 10) throw std::invalid_argument("empirical_moments: K > 10");
    if (traces.size() < 30) throw std::invalid_argument("empirical_moments: undersized sample");
    size_t n = traces.size();
    std::vector<MomentEstimate> out(K);
    // exact power sums up to 2K for means and variances
    std::vector<Rational> pow_sum(2 * K + 1, Rational(0));
    for (const Rational& t : traces) {
        Rational p(1);
        for (int e = 1; e <= 2 * K; ++e) {
            p *= t;
            pow_sum[e] += p;
        }
    }
    for (int e = 1; e <= 2 * K; ++e) pow_sum[e].canonicalize();
    for (int m = 1; m <= K; ++m) {
        MomentEstimate me;
        me.exact_mean = pow_sum[m] / Rational(long(n));
        me.exact_mean.canonicalize();
        me.mean = me.exact_mean.get_d();
        Rational m2r = pow_sum[2 * m] / Rational(long(n));
        double m2 = m2r.get_d();
        double var = (m2 - me.mean * me.mean) * double(n) / double(n - 1);
        me.se = std::sqrt(std::max(var, 0.0) / double(n));
        out[m - 1] = me;
    }
    return out;
}

std::pair<uint64_t, Rational> spike_mass(const std::vector<Rational>& traces) {
    uint64_t zeros = 0;
    for (const Rational& t : traces)
        if (t == 0) ++zeros;
    Rational frac(0);
    if (!traces.empty()) {
        frac = Rational(BigInt(zeros), BigInt(traces.size()));
        frac.canonicalize();
    }
    return {zeros, frac};
}

ComponentSplit component_split(const SurfaceModel& s, const std::vector<TraceRecord>& recs) {
    if (!s.jump_disc) throw std::invalid_argument("component_split: no jump character");
    ComponentSplit cs;
    int64_t d = *s.jump_disc;
    if (d == 1) {
        cs.trivial = true;
        for (const auto& r : recs) cs.plus.push_back(r.trace);
        cs.plus_size = cs.plus.size();
        return cs;
    }
    for (const auto& r : recs) {
        int chi = kronecker(d, int64_t(r.p));
        if (chi >= 0) {
            cs.plus.push_back(r.trace);
        } else {
            cs.minus.push_back(r.trace);
        }
    }
    cs.plus_size = cs.plus.size();
    cs.minus_size = cs.minus.size();
    return cs;
}

double ks_distance(const std::vector<Rational>& traces, const MixtureCdf& cdf) {
    std::vector<double> xs;
    xs.reserve(traces.size());
    for (const Rational& t : traces) xs.push_back(t.get_d());
    std::sort(xs.begin(), xs.end());
    size_t n = xs.size();
    double d = 0;
    for (size_t i = 0; i < n; ++i) {
        double fi = cdf.eval(xs[i]);
        double fl = cdf.eval_left(xs[i]);
        d = std::max(d, std::fabs(double(i + 1) / double(n) - fi));
        d = std::max(d, std::fabs(double(i) / double(n) - fl));
    }
    return d;
}

ComparisonReport compare(const SurfaceModel& s, const std::vector<TraceRecord>& recs,
                         const GroupSpec& spec, int K) {
    ComparisonReport rep;
    rep.surface_id = s.id;
    rep.group_label = spec.label;
    rep.samples = recs.size();

    auto [lo, hi] = trace_support(spec);
    std::vector<Rational> traces;
    traces.reserve(recs.size());
    for (const auto& r : recs) {
        double t = r.trace.get_d();
        if (t < lo - 1e-9 || t > hi + 1e-9)
            throw std::invalid_argument("compare: trace outside the spec support (wrong spec?)");
        traces.push_back(r.trace);
    }

    rep.empirical = empirical_moments(traces, K);
    std::vector<Rational> theo = mixture_moments(spec, K);
    rep.theoretical.resize(K);
    rep.z.resize(K);
    for (int m = 1; m <= K; ++m) {
        rep.theoretical[m - 1] = theo[m].get_d();
        double se = rep.empirical[m - 1].se;
        rep.z[m - 1] = se > 0 ? (rep.empirical[m - 1].mean - rep.theoretical[m - 1]) / se
                              : 0.0;
        rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(rep.z[m - 1]));
    }
    auto [zeros, frac] = spike_mass(traces);
    rep.zero_count = zeros;
    rep.spike_fraction = frac.get_d();
    rep.atom_mass = spec.coset_only ? 0.0 : spec.atom_mass().get_d();
    rep.ks_distance = ks_distance(traces, mixture_cdf(spec));
    return rep;
}

}  // namespace k3trace
