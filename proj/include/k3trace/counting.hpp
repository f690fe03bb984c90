#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3trace/ntheory.hpp"
#include "k3trace/rational.hpp"

namespace k3trace {

struct weil_bound_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct bad_prime_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct stale_cache_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact congruence test on p predicting trace zero.
struct ZeroTracePredicate {
    int modulus;
    std::vector<int> residues;
    bool negated = false;  // true: trace 0 for p NOT in residues (mod modulus)

    bool operator()(uint64_t p) const;
};

/// Monomial x^a y^b z^c with an integer coefficient.
struct Monomial {
    int a, b, c;
    int64_t coeff;
};

/// One of the seven catalogued singular sextic double covers w^2 = f(x,y,z).
struct SurfaceModel {
    std::string id;  // "X1" .. "X7"
    std::vector<std::array<int64_t, 3>> linear_factors;
    std::vector<Monomial> tail_factor;  // non-linear factor, empty if f splits
    int r;   // geometric Picard rank
    int r0;  // number of blown-down nodes
    std::vector<uint32_t> bad_primes;
    std::optional<int64_t> jump_disc;
    bool jump_conjectural = false;
    std::optional<ZeroTracePredicate> zero_pred;
    bool zero_pred_conjectural = false;
    /// Trace of Frobenius on the non-exceptional algebraic classes:
    /// alg_const plus the sum of the quadratic characters (d/p). Constant
    /// r - r0 except where the extra classes are only defined over
    /// quadratic extensions.
    int alg_const;
    std::vector<int64_t> alg_characters;
    std::string group_label;  // hard-coded Sato-Tate spec label

    bool is_good_prime(uint64_t p) const;
    /// Tr Frob_{p^k} on the algebraic complement of the blown-down classes.
    int64_t algebraic_multiplier(uint64_t p, uint32_t k = 1) const;
    /// All monomials of f, expanded.
    std::vector<Monomial> expanded() const;
};

const std::vector<SurfaceModel>& catalog();
const SurfaceModel& surface_by_id(const std::string& id);

/// #X'(F_q) by enumeration of the canonical projective representatives:
/// N = q^2 + q + 1 + sum over P^2(F_q) of chi(f(P)).
/// Throws bad_prime_error for bad primes of the surface (including p = 2).
uint64_t count_points(const SurfaceModel& s, const Field& F);

/// Independent oracle: counts affine solutions of w^2 = f over F_p^3 and
/// converts, ((sum #roots) - 1)/(p - 1). Deliberately a separate code path.
uint64_t count_points_affine(const SurfaceModel& s, uint32_t p);

/// Exact normalized transcendental trace (N - 1 - q^2 - q(r - r0))/q.
/// Throws weil_bound_error when |trace| > 22 - r.
Rational trace_from_count(uint64_t N, uint64_t q, int r, int r0);

struct TraceRecord {
    uint64_t p;
    uint32_t k;
    uint64_t q;
    uint64_t N;
    Rational trace;
};

/// Record with the surface's algebraic multiplier folded in.
TraceRecord make_record(const SurfaceModel& s, uint64_t p, uint32_t k, uint64_t N);

/// Newton's identities: power sums s_1..s_kmax of the roots of
/// t^d - e1 t^(d-1) + e2 t^(d-2) - ... from the elementary symmetric e_i.
std::vector<Rational> newton_power_sums(const std::vector<Rational>& e, int kmax);

/// Traces over F_{p^k} for k = 1..kmax (enumeration budget: q <= 4096).
std::vector<Rational> power_sum_check(const SurfaceModel& s, uint32_t p, uint32_t kmax);

/// On-disk point-count cache: "# surface=<id> version=<v> pmax=<n>" header,
/// then "q,N" per line. Raw counts only; traces are recomputed on load.
struct CountCache {
    std::string surface_id;
    int version = kVersion;
    uint64_t pmax = 0;
    std::map<uint64_t, uint64_t> counts;  // q -> N

    static constexpr int kVersion = 1;

    static CountCache load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
    std::vector<TraceRecord> records(const SurfaceModel& s, uint64_t limit = 0) const;
};

/// Count all good primes <= pmax, resuming from (and extending) the cache.
/// Shards primes across threads; the result is independent of the schedule.
CountCache scan(const SurfaceModel& s, uint64_t pmax, CountCache cache, int threads = 1,
                const std::filesystem::path& checkpoint = {});

}  // namespace k3trace
