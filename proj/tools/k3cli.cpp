// Command-line front end: exact Sato-Tate moments, theoretical trace
// densities, point-count scans and statistical comparisons for the seven
// catalogued K3 double covers. All output is plain CSV-ish text meant for
// gnuplot or downstream scripts.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "k3trace/counting.hpp"
#include "k3trace/density.hpp"
#include "k3trace/liegroups.hpp"
#include "k3trace/montecarlo.hpp"
#include "k3trace/spline.hpp"
#include "k3trace/stats.hpp"

namespace {

using namespace k3trace;

constexpr const char* kVersion = "k3trace 1.0";

struct Options {
    std::string group;
    std::string surface;
    std::string method = "levelset";
    std::string cache_dir = "cache";
    std::string out;
    uint64_t pmax = 10000;
    int k_moments = 25;
    int grid = 601;
    int bins = 300;
    uint64_t seed = 1;
    int threads = 1;
    uint64_t mc_count = 0;
};

std::ostream& open_out(const Options& opt, std::ofstream& file) {
    if (opt.out.empty()) return std::cout;
    file.open(opt.out);
    if (!file) throw std::runtime_error("cannot open output file " + opt.out);
    return file;
}

void provenance(std::ostream& os, const std::string& cmd, const Options& opt) {
    os << "# " << kVersion << " " << cmd;
    if (!opt.group.empty()) os << " group=" << opt.group;
    if (!opt.surface.empty()) os << " surface=" << opt.surface;
    os << " pmax=" << opt.pmax << " k=" << opt.k_moments << " seed=" << opt.seed
       << "\n";
}

std::filesystem::path cache_path(const Options& opt, const SurfaceModel& s) {
    std::filesystem::create_directories(opt.cache_dir);
    return std::filesystem::path(opt.cache_dir) / (s.id + ".cache");
}

CountCache load_or_empty(const Options& opt, const SurfaceModel& s) {
    auto path = cache_path(opt, s);
    if (std::filesystem::exists(path)) return CountCache::load(path);
    CountCache c;
    c.surface_id = s.id;
    return c;
}

int cmd_moments(const Options& opt) {
    std::ofstream file;
    std::ostream& os = open_out(opt, file);
    provenance(os, "moments", opt);
    std::vector<Rational> ms;
    if (opt.group == "o6minus") {
        ms = coset_moments(3, opt.k_moments);
    } else {
        ms = mixture_moments(spec_for_label(opt.group), opt.k_moments);
    }
    os << "group,n,numerator,denominator\n";
    for (size_t n = 0; n < ms.size(); ++n)
        os << opt.group << "," << n << "," << ms[n].get_num().get_str() << ","
           << ms[n].get_den().get_str() << "\n";
    return 0;
}

int cmd_density(const Options& opt) {
    GroupSpec spec = spec_for_label(opt.group);
    std::ofstream file;
    std::ostream& os = open_out(opt, file);
    provenance(os, "density", opt);
    if (opt.method == "levelset") {
        DensityCurve dc = mixture_density(spec, opt.grid);
        os << "x,density\n";
        for (size_t i = 0; i < dc.xs.size(); ++i)
            os << dc.xs[i] << "," << dc.values[i] << "\n";
        for (const auto& [loc, mass] : dc.atoms)
            os << "atom," << loc << "," << mass.get_str() << "\n";
        return 0;
    }
    if (opt.method == "spline") {
        if (opt.group == "u1cube" || opt.group == "x7")
            throw std::invalid_argument(
                "method-unsupported: the [U1]^3 trace density is not a C^2 function; "
                "cubic-spline reconstruction oscillates -- use --method levelset");
        int K = opt.k_moments;
        std::vector<Rational> ms = mixture_moments(spec, K);
        Rational atom = spec.atom_mass();
        ms[0] -= atom;  // fit the continuous part
        auto [lo, hi] = trace_support(spec);
        SplineDensity sd = spline_from_moments(
            ms, {Rational(int(lo)), Rational(int(hi))}, 30);
        os << "x,density\n";
        for (int i = 1; i <= opt.grid; ++i) {
            double x = lo + (hi - lo) * i / (opt.grid + 1);
            os << x << "," << sd.eval(x) << "\n";
        }
        if (atom != 0) os << "atom,0," << atom.get_str() << "\n";
        os << "# max_moment_residual=" << sd.max_moment_residual
           << " undershoot=" << sd.min_value << "\n";
        return 0;
    }
    throw std::invalid_argument("unknown density method: " + opt.method);
}

int cmd_scan(const Options& opt) {
    const SurfaceModel& s = surface_by_id(opt.surface);
    auto t0 = std::chrono::steady_clock::now();
    CountCache cache = load_or_empty(opt, s);
    cache = scan(s, opt.pmax, std::move(cache), opt.threads, cache_path(opt, s));
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::ofstream file;
    std::ostream& os = open_out(opt, file);
    provenance(os, "scan", opt);
    os << "# surface=" << s.id << " records=" << cache.counts.size()
       << " wall_seconds=" << secs << "\n";
    return 0;
}

int cmd_traces(const Options& opt) {
    const SurfaceModel& s = surface_by_id(opt.surface);
    CountCache cache = load_or_empty(opt, s);
    std::ofstream file;
    std::ostream& os = open_out(opt, file);
    provenance(os, "traces", opt);
    os << "p,q,N,trace_num,trace_den\n";
    for (const TraceRecord& r : cache.records(s, opt.pmax))
        os << r.p << "," << r.q << "," << r.N << "," << r.trace.get_num().get_str()
           << "," << r.trace.get_den().get_str() << "\n";
    return 0;
}

int cmd_hist(const Options& opt) {
    const SurfaceModel& s = surface_by_id(opt.surface);
    CountCache cache = load_or_empty(opt, s);
    std::vector<Rational> traces;
    for (const TraceRecord& r : cache.records(s, opt.pmax)) traces.push_back(r.trace);
    Histogram h = build_histogram(traces);
    std::ofstream file;
    std::ostream& os = open_out(opt, file);
    provenance(os, "hist", opt);
    os << "bin_left,count,frequency\n";
    for (int b = 0; b < Histogram::kBins; ++b)
        os << (Histogram::kLo + 0.04 * b) << "," << h.counts[b] << "," << h.frequency(b)
           << "\n";
    return 0;
}

int cmd_compare(const Options& opt) {
    const SurfaceModel& s = surface_by_id(opt.surface);
    CountCache cache = load_or_empty(opt, s);
    std::vector<TraceRecord> recs = cache.records(s, opt.pmax);
    if (recs.empty()) throw std::runtime_error("no records; run scan first");
    GroupSpec spec = spec_for_label(s.group_label);
    ComparisonReport rep = compare(s, recs, spec);
    std::ofstream file;
    std::ostream& os = open_out(opt, file);
    provenance(os, "compare", opt);
    os << "surface=" << rep.surface_id << " group=" << rep.group_label
       << " samples=" << rep.samples << "\n";
    os << "n,empirical,se,theoretical,z\n";
    for (size_t i = 0; i < rep.z.size(); ++i)
        os << (i + 1) << "," << rep.empirical[i].mean << "," << rep.empirical[i].se << ","
           << rep.theoretical[i] << "," << rep.z[i] << "\n";
    os << "zero_count=" << rep.zero_count << " spike_fraction=" << rep.spike_fraction
       << " atom_mass=" << rep.atom_mass << "\n";
    os << "ks_distance=" << rep.ks_distance << " max_abs_z=" << rep.max_abs_z << "\n";
    if (s.jump_disc && *s.jump_disc != 1) {
        ComponentSplit cs = component_split(s, recs);
        os << "split_plus=" << cs.plus_size << " split_minus=" << cs.minus_size << "\n";
    }
    return 0;
}

int cmd_powersums(const Options& opt) {
    const SurfaceModel& s = surface_by_id(opt.surface);
    std::ofstream file;
    std::ostream& os = open_out(opt, file);
    provenance(os, "powersums", opt);
    uint32_t p = uint32_t(opt.pmax);
    std::vector<Rational> sums = power_sum_check(s, p, uint32_t(opt.k_moments));
    os << "k,q,s_num,s_den\n";
    uint64_t q = 1;
    for (size_t k = 0; k < sums.size(); ++k) {
        q *= p;
        os << (k + 1) << "," << q << "," << sums[k].get_num().get_str() << ","
           << sums[k].get_den().get_str() << "\n";
    }
    return 0;
}

int cmd_mc(const Options& opt) {
    GroupSpec spec = spec_for_label(opt.group);
    std::ofstream file;
    std::ostream& os = open_out(opt, file);
    provenance(os, "mc", opt);
    uint64_t n = opt.mc_count ? opt.mc_count : 100000;
    std::vector<double> tr = monte_carlo_traces(spec, n, opt.seed);
    os << "trace\n";
    for (double t : tr) os << t << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sato-Tate trace distributions for K3 double covers"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config");
    app.require_subcommand(1);

    Options opt;
    app.add_option("--group", opt.group, "group label (so3, so6, u3, o6, x1..x7, ...)");
    app.add_option("--surface", opt.surface, "surface id X1..X7");
    app.add_option("--pmax", opt.pmax, "prime bound (also: p for powersums)");
    app.add_option("--k", opt.k_moments, "moment count / extension degree bound");
    app.add_option("--method", opt.method, "density method: levelset | spline");
    app.add_option("--grid", opt.grid, "density grid points");
    app.add_option("--bins", opt.bins, "histogram bins (fixed at 300 by the protocol)");
    app.add_option("--cache", opt.cache_dir, "cache directory");
    app.add_option("--out", opt.out, "output file (default stdout)");
    app.add_option("--seed", opt.seed, "Monte Carlo seed");
    app.add_option("--threads", opt.threads, "worker threads for scans");
    app.add_option("--count", opt.mc_count, "Monte Carlo sample count");

    app.add_subcommand("moments", "exact moment table for a group label");
    app.add_subcommand("density", "theoretical trace density curve");
    app.add_subcommand("scan", "count points for all good primes up to pmax");
    app.add_subcommand("traces", "emit cached trace records as CSV");
    app.add_subcommand("hist", "histogram of cached traces");
    app.add_subcommand("compare", "empirical vs theoretical comparison report");
    app.add_subcommand("powersums", "traces over F_{p^k} for k = 1..K");
    app.add_subcommand("mc", "Monte Carlo trace samples from the Haar measure");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("moments")) return cmd_moments(opt);
        if (app.got_subcommand("density")) return cmd_density(opt);
        if (app.got_subcommand("scan")) return cmd_scan(opt);
        if (app.got_subcommand("traces")) return cmd_traces(opt);
        if (app.got_subcommand("hist")) return cmd_hist(opt);
        if (app.got_subcommand("compare")) return cmd_compare(opt);
        if (app.got_subcommand("powersums")) return cmd_powersums(opt);
        if (app.got_subcommand("mc")) return cmd_mc(opt);
    } catch (const k3trace::bad_prime_error& e) {
        std::cerr << "error: bad-prime: " << e.what() << "\n";
        return 2;
    } catch (const k3trace::weil_bound_error& e) {
        std::cerr << "error: weil-bound: " << e.what() << "\n";
        return 3;
    } catch (const k3trace::stale_cache_error& e) {
        std::cerr << "error: stale-cache: " << e.what() << "\n";
        return 4;
    } catch (const std::length_error& e) {
        std::cerr << "error: size: " << e.what() << "\n";
        return 5;
    } catch (const std::domain_error& e) {
        std::cerr << "error: domain: " << e.what() << "\n";
        return 6;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: argument: " << e.what() << "\n";
        return 7;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
