#include "k3trace/counting.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace k3trace {

bool ZeroTracePredicate::operator()(uint64_t p) const {
    int r = int(p % uint64_t(modulus));
    bool in = std::find(residues.begin(), residues.end(), r) != residues.end();
    return negated ? !in : in;
}

bool SurfaceModel::is_good_prime(uint64_t p) const {
    if (p == 2) return false;
    return std::find(bad_primes.begin(), bad_primes.end(), p) == bad_primes.end();
}

int64_t SurfaceModel::algebraic_multiplier(uint64_t p, uint32_t k) const {
    int64_t m = alg_const;
    for (int64_t d : alg_characters) {
        int chi = kronecker(d, int64_t(p));
        m += (k % 2 == 0) ? chi * chi : chi;
    }
    return m;
}

std::vector<Monomial> SurfaceModel::expanded() const {
    // multiply the factors as trivariate polynomials over Z
    std::map<std::array<int, 3>, int64_t> acc;
    acc[{0, 0, 0}] = 1;
    auto mul_in = [&acc](const std::vector<Monomial>& factor) {
        std::map<std::array<int, 3>, int64_t> next;
        for (const auto& [e, c] : acc)
            for (const Monomial& m : factor) {
                std::array<int, 3> f{e[0] + m.a, e[1] + m.b, e[2] + m.c};
                next[f] += c * m.coeff;
            }
        for (auto it = next.begin(); it != next.end();)
            it = it->second == 0 ? next.erase(it) : std::next(it);
        acc = std::move(next);
    };
    for (const auto& lf : linear_factors) {
        std::vector<Monomial> f;
        if (lf[0]) f.push_back({1, 0, 0, lf[0]});
        if (lf[1]) f.push_back({0, 1, 0, lf[1]});
        if (lf[2]) f.push_back({0, 0, 1, lf[2]});
        mul_in(f);
    }
    if (!tail_factor.empty()) mul_in(tail_factor);
    std::vector<Monomial> out;
    for (const auto& [e, c] : acc) out.push_back({e[0], e[1], e[2], c});
    return out;
}

namespace {

std::vector<Monomial> parse_poly(const std::vector<std::array<int, 4>>& rows) {
    std::vector<Monomial> p;
    for (const auto& r : rows) p.push_back({r[0], r[1], r[2], r[3]});
    return p;
}

std::vector<SurfaceModel> build_catalog() {
    std::vector<SurfaceModel> cat;

    SurfaceModel x1;
    x1.id = "X1";
    x1.linear_factors = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                         {1, 1, 1}, {3, 5, 7}, {-5, 11, -2}};
    x1.r = 16;
    x1.r0 = 15;
    x1.bad_primes = {2, 3, 5, 7, 11, 13, 29};
    x1.jump_disc = -6006;
    x1.alg_const = 1;
    x1.group_label = "x1";
    cat.push_back(x1);

    SurfaceModel x2;
    x2.id = "X2";
    x2.linear_factors = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                         {2, 4, -3}, {1, -5, -3}, {1, 3, 3}};
    x2.r = 16;
    x2.r0 = 15;
    x2.bad_primes = {2, 3, 5, 7};
    x2.jump_disc = 1;
    x2.alg_const = 1;
    x2.group_label = "x2";
    cat.push_back(x2);

    SurfaceModel x3;
    x3.id = "X3";
    x3.linear_factors = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                         {4, 9, 1}, {-1, -1, -4}, {16, 25, 1}};
    x3.r = 17;
    x3.r0 = 15;
    x3.bad_primes = {2, 3, 5};
    x3.jump_disc = 1;
    x3.alg_const = 2;
    x3.group_label = "x3";
    cat.push_back(x3);

    SurfaceModel x4;
    x4.id = "X4";
    x4.linear_factors = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                         {1, 1, 1}, {1, 2, 3}, {5, 8, 20}};
    x4.r = 16;
    x4.r0 = 15;
    x4.bad_primes = {2, 3, 5, 7, 11};
    x4.jump_disc = -1;
    x4.zero_pred = ZeroTracePredicate{4, {3}, false};
    x4.alg_const = 1;
    x4.group_label = "x4";
    cat.push_back(x4);

    SurfaceModel x5;
    x5.id = "X5";
    x5.linear_factors = {{1, 0, 0}, {0, 1, 0}};
    x5.tail_factor = parse_poly({{4, 0, 0, 1},  {3, 1, 0, -7},  {3, 0, 1, -1},
                                 {2, 2, 0, 19}, {2, 1, 1, 4},   {2, 0, 2, 1},
                                 {1, 3, 0, -23}, {1, 2, 1, -7}, {1, 1, 2, -6},
                                 {1, 0, 3, -1}, {0, 4, 0, 11},  {0, 3, 1, 7},
                                 {0, 2, 2, 9},  {0, 1, 3, 3},   {0, 0, 4, 1}});
    x5.r = 16;
    x5.r0 = 15;
    x5.bad_primes = {2, 5};
    x5.jump_disc = 1;
    x5.zero_pred = ZeroTracePredicate{5, {2, 3}, false};
    x5.alg_const = 1;
    x5.group_label = "x5";
    cat.push_back(x5);

    SurfaceModel x6;
    x6.id = "X6";
    x6.linear_factors = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    x6.tail_factor = parse_poly({{3, 0, 0, 1},  {2, 0, 1, -14}, {1, 2, 0, 11},
                                 {1, 0, 2, -1}, {0, 3, 0, 12},  {0, 2, 1, -14},
                                 {0, 1, 2, -12}, {0, 0, 3, 14}});
    x6.r = 16;
    x6.r0 = 12;
    x6.bad_primes = {2, 3, 5, 7, 11, 13, 17, 47};
    x6.jump_disc = 3;
    x6.jump_conjectural = true;
    x6.zero_pred = ZeroTracePredicate{12, {5, 7}, false};
    x6.zero_pred_conjectural = true;
    // non-exceptional algebraic classes: the hyperplane plus three classes
    // defined over Q(sqrt 14), Q(sqrt 42), Q(sqrt -42)
    x6.alg_const = 1;
    x6.alg_characters = {14, 42, -42};
    x6.group_label = "x6";
    cat.push_back(x6);

    SurfaceModel x7;
    x7.id = "X7";
    x7.linear_factors = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    x7.tail_factor = parse_poly({{3, 0, 0, 1}, {2, 0, 1, -3}, {1, 2, 0, -3},
                                 {1, 1, 1, -3}, {0, 3, 0, 1}, {0, 2, 1, 9},
                                 {0, 1, 2, 6}, {0, 0, 3, 1}});
    x7.r = 16;
    x7.r0 = 15;
    x7.bad_primes = {2, 3};
    x7.jump_disc = -1;
    // trace is nonzero only when p splits completely in the endomorphism
    // field, i.e. p = 1 or 17 (mod 36); zero everywhere else
    x7.zero_pred = ZeroTracePredicate{36, {1, 17}, true};
    x7.alg_const = 1;
    x7.group_label = "x7";
    cat.push_back(x7);

    return cat;
}

}  // namespace

const std::vector<SurfaceModel>& catalog() {
    static const std::vector<SurfaceModel> cat = build_catalog();
    return cat;
}

const SurfaceModel& surface_by_id(const std::string& id) {
    for (const auto& s : catalog())
        if (s.id == id) return s;
    throw std::invalid_argument("unknown surface id: " + id);
}

namespace {

/// Coefficient matrix C[i][j] = coefficient of y^i z^j in f(x0, y, z).
std::array<std::array<int64_t, 7>, 7> slice_x(const std::vector<Monomial>& f, int x0) {
    std::array<std::array<int64_t, 7>, 7> C{};
    for (const Monomial& m : f) {
        if (x0 == 0 && m.a != 0) continue;
        C[m.b][m.c] += m.coeff;  // x0 is 0 or 1
    }
    return C;
}

/// chi sum over the affine chart points (x0 : y : z), y and z ranging over
/// F_p, using forward differences of the degree-6 slice in z.
int64_t chart_chi_sum(const Field& F, const std::array<std::array<int64_t, 7>, 7>& C,
                      bool y_fixed_one) {
    uint32_t p = F.p();
    int64_t sum = 0;
    uint32_t ystart = 0, yend = y_fixed_one ? 1 : p;
    for (uint32_t y = ystart; y < yend; ++y) {
        uint64_t yy = y_fixed_one ? 1 : y;
        // z-polynomial coefficients at this y, reduced mod p
        uint64_t c[7];
        uint64_t ypow[7];
        ypow[0] = 1;
        for (int i = 1; i < 7; ++i) ypow[i] = ypow[i - 1] * yy % p;
        for (int j = 0; j < 7; ++j) {
            uint64_t acc = 0;
            for (int i = 0; i < 7; ++i) {
                int64_t coef = C[i][j] % int64_t(p);
                if (coef < 0) coef += p;
                acc = (acc + uint64_t(coef) * ypow[i]) % p;
            }
            c[j] = acc;
        }
        // forward differences: d[i] = Delta^i poly at z = 0 (mod p)
        // first evaluate poly at z = 0..6, then difference
        uint64_t vals[7];
        for (int z = 0; z < 7; ++z) {
            uint64_t zz = uint64_t(z) % p;
            uint64_t acc = 0;
            for (int j = 6; j >= 0; --j) acc = (acc * zz + c[j]) % p;
            vals[z] = acc;
        }
        uint64_t d[7];
        for (int i = 0; i < 7; ++i) d[i] = vals[i];
        for (int i = 1; i < 7; ++i)
            for (int j = 6; j >= i; --j) d[j] = (d[j] + p - d[j - 1]) % p;
        if (p <= 6) {
            // tiny fields: direct evaluation
            for (uint32_t z = 0; z < p; ++z) {
                uint64_t acc = 0;
                for (int j = 6; j >= 0; --j) acc = (acc * z + c[j]) % p;
                sum += F.chi(acc);
            }
            continue;
        }
        // iterate z = 0..p-1, maintaining the difference ladder
        for (uint32_t z = 0; z < p; ++z) {
            sum += F.chi(d[0]);
            for (int i = 0; i < 6; ++i) {
                d[i] += d[i + 1];
                if (d[i] >= p) d[i] -= p;
            }
        }
    }
    return sum;
}

}  // namespace

uint64_t count_points(const SurfaceModel& s, const Field& F) {
    if (!s.is_good_prime(F.p()))
        throw bad_prime_error("count_points: " + std::to_string(F.p()) +
                              " is a bad prime for " + s.id);
    uint64_t q = F.q();
    std::vector<Monomial> f = s.expanded();
    if (F.k() == 1) {
        auto C1 = slice_x(f, 1);
        auto C0 = slice_x(f, 0);
        int64_t sum = chart_chi_sum(F, C1, false);   // [1 : y : z]
        sum += chart_chi_sum(F, C0, true);           // [0 : 1 : z]
        // [0 : 0 : 1]: f(0,0,1)
        int64_t f001 = 0;
        for (const Monomial& m : f)
            if (m.a == 0 && m.b == 0) f001 += m.coeff;
        int64_t r = f001 % int64_t(F.p());
        if (r < 0) r += F.p();
        sum += F.chi(uint64_t(r));
        return uint64_t(int64_t(q * q + q + 1) + sum);
    }
    // generic extension-field path
    if (q > 4096) throw std::length_error("count_points: q exceeds the extension budget");
    int64_t sum = 0;
    auto eval_at = [&](const Field::Elem& x, const Field::Elem& y, const Field::Elem& z) {
        // powers
        std::vector<Field::Elem> xp(7, F.one()), yp(7, F.one()), zp(7, F.one());
        for (int i = 1; i < 7; ++i) {
            xp[i] = F.mul(xp[i - 1], x);
            yp[i] = F.mul(yp[i - 1], y);
            zp[i] = F.mul(zp[i - 1], z);
        }
        Field::Elem acc = F.zero();
        for (const Monomial& m : f) {
            int64_t cr = m.coeff % int64_t(F.p());
            if (cr < 0) cr += F.p();
            if (cr == 0) continue;
            Field::Elem t = F.mul(F.mul(xp[m.a], yp[m.b]), zp[m.c]);
            t = F.mul(t, F.from_int(uint64_t(cr)));
            acc = F.add(acc, t);
        }
        return acc;
    };
    for (uint64_t yi = 0; yi < q; ++yi) {
        Field::Elem y = F.element(yi);
        for (uint64_t zi = 0; zi < q; ++zi)
            sum += F.quadratic_character(eval_at(F.one(), y, F.element(zi)));
    }
    for (uint64_t zi = 0; zi < q; ++zi)
        sum += F.quadratic_character(eval_at(F.zero(), F.one(), F.element(zi)));
    sum += F.quadratic_character(eval_at(F.zero(), F.zero(), F.one()));
    return uint64_t(int64_t(q * q + q + 1) + sum);
}

uint64_t count_points_affine(const SurfaceModel& s, uint32_t p) {
    if (!s.is_good_prime(p)) throw bad_prime_error("count_points_affine: bad prime");
    Field F(p);
    std::vector<Monomial> f = s.expanded();
    uint64_t total = 0;
    for (uint32_t x = 0; x < p; ++x)
        for (uint32_t y = 0; y < p; ++y)
            for (uint32_t z = 0; z < p; ++z) {
                uint64_t acc = 0;
                for (const Monomial& m : f) {
                    int64_t cr = m.coeff % int64_t(p);
                    if (cr < 0) cr += p;
                    uint64_t t = uint64_t(cr);
                    for (int i = 0; i < m.a; ++i) t = t * x % p;
                    for (int i = 0; i < m.b; ++i) t = t * y % p;
                    for (int i = 0; i < m.c; ++i) t = t * z % p;
                    acc = (acc + t) % p;
                }
                total += uint64_t(1 + F.chi(acc));
            }
    return (total - 1) / (p - 1);
}

Rational trace_from_count(uint64_t N, uint64_t q, int r, int r0) {
    BigInt num = BigInt(N) - 1 - BigInt(q) * q - BigInt(q) * (r - r0);
    Rational t(num, BigInt(q));
    t.canonicalize();
    Rational bound(22 - r);
    if (abs(t) > bound)
        throw weil_bound_error("trace " + t.get_str() + " violates the Weil bound");
    return t;
}

TraceRecord make_record(const SurfaceModel& s, uint64_t p, uint32_t k, uint64_t N) {
    uint64_t q = 1;
    for (uint32_t i = 0; i < k; ++i) q *= p;
    BigInt num = BigInt(N) - 1 - BigInt(q) * q - BigInt(q) * s.algebraic_multiplier(p, k);
    Rational t(num, BigInt(q));
    t.canonicalize();
    if (abs(t) > Rational(22 - s.r))
        throw weil_bound_error(s.id + " p=" + std::to_string(p) + ": trace " +
                               t.get_str() + " violates the Weil bound");
    return TraceRecord{p, k, q, N, t};
}

std::vector<Rational> newton_power_sums(const std::vector<Rational>& e, int kmax) {
    std::vector<Rational> s(kmax + 1, Rational(0));
    auto ei = [&](int i) { return i < int(e.size()) ? e[i] : Rational(0); };
    for (int k = 1; k <= kmax; ++k) {
        Rational acc = Rational(k) * ei(k) * (k % 2 ? 1 : -1);
        for (int i = 1; i < k; ++i) acc += (i % 2 ? 1 : -1) * ei(i) * s[k - i];
        s[k] = acc;
        s[k].canonicalize();
    }
    return std::vector<Rational>(s.begin() + 1, s.end());
}

std::vector<Rational> power_sum_check(const SurfaceModel& s, uint32_t p, uint32_t kmax) {
    std::vector<Rational> out;
    uint64_t q = 1;
    for (uint32_t k = 1; k <= kmax; ++k) {
        q *= p;
        if (q > 4096) throw std::length_error("power_sum_check: q exceeds budget");
        Field F(p, k);
        uint64_t N = count_points(s, F);
        out.push_back(make_record(s, p, k, N).trace);
    }
    return out;
}

CountCache CountCache::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cache: " + path.string());
    CountCache c;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# surface=", 0) != 0)
        throw stale_cache_error("cache header missing: " + path.string());
    std::istringstream hs(line.substr(2));
    std::string tok;
    int version = -1;
    while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "surface") c.surface_id = val;
        else if (key == "version") version = std::stoi(val);
        else if (key == "pmax") c.pmax = std::stoull(val);
    }
    if (version != kVersion)
        throw stale_cache_error("cache version mismatch in " + path.string());
    c.version = version;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed cache line: " + line);
        uint64_t q = std::stoull(line.substr(0, comma));
        uint64_t N = std::stoull(line.substr(comma + 1));
        auto [it, inserted] = c.counts.emplace(q, N);
        if (!inserted && it->second != N)
            throw std::runtime_error("conflicting cache entries for q=" + std::to_string(q));
    }
    return c;
}

void CountCache::save(const std::filesystem::path& path) const {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write cache: " + path.string());
        out << "# surface=" << surface_id << " version=" << version << " pmax=" << pmax
            << "\n";
        for (const auto& [q, N] : counts) out << q << "," << N << "\n";
    }
    std::filesystem::rename(tmp, path);
}

std::vector<TraceRecord> CountCache::records(const SurfaceModel& s, uint64_t limit) const {
    std::vector<TraceRecord> out;
    for (const auto& [q, N] : counts) {
        if (limit && q > limit) continue;
        out.push_back(make_record(s, q, 1, N));
    }
    return out;
}

CountCache scan(const SurfaceModel& s, uint64_t pmax, CountCache cache, int threads,
                const std::filesystem::path& checkpoint) {
    if (!cache.surface_id.empty() && cache.surface_id != s.id)
        throw stale_cache_error("cache belongs to " + cache.surface_id + ", not " + s.id);
    cache.surface_id = s.id;
    std::vector<uint32_t> primes = sieve_primes(uint32_t(pmax));
    std::vector<uint32_t> todo;
    for (uint32_t p : primes)
        if (s.is_good_prime(p) && !cache.counts.count(p)) todo.push_back(p);

    if (!todo.empty()) {
        std::atomic<size_t> next{0};
        std::mutex mu;
        std::map<uint64_t, uint64_t> fresh;
        auto worker = [&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= todo.size()) break;
                Field F(todo[i]);
                uint64_t N = count_points(s, F);
                std::lock_guard<std::mutex> lock(mu);
                fresh.emplace(todo[i], N);
            }
        };
        int nthreads = std::max(1, threads);
        std::vector<std::thread> pool;
        std::atomic<bool> done{false};
        std::thread flusher;
        if (!checkpoint.empty()) {
            flusher = std::thread([&] {
                while (!done.load()) {
                    std::this_thread::sleep_for(std::chrono::seconds(20));
                    CountCache snap = cache;
                    {
                        std::lock_guard<std::mutex> lock(mu);
                        snap.counts.insert(fresh.begin(), fresh.end());
                    }
                    snap.pmax = std::max(cache.pmax, pmax);
                    snap.save(checkpoint);
                }
            });
        }
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        done.store(true);
        if (flusher.joinable()) flusher.join();
        cache.counts.insert(fresh.begin(), fresh.end());
    }
    cache.pmax = std::max(cache.pmax, pmax);
    if (!checkpoint.empty()) cache.save(checkpoint);
    return cache;
}

}  // namespace k3trace
