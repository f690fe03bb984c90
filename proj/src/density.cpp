#include "k3trace/density.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace k3trace {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RootList {
    std::vector<std::array<double, 4>> roots;  // coefficients of theta_i
    int dim;

    double operator()(const double* th) const {
        double w = 1;
        for (const auto& r : roots) {
            double ang = 0;
            for (int i = 0; i < dim; ++i) ang += r[i] * th[i];
            w *= 2 - 2 * std::cos(ang);
        }
        return w;
    }
};

LaurentPoly lift(const LaurentPoly& p, int vars, int shift) {
    LaurentPoly out(vars);
    for (const auto& [e, c] : p.terms()) {
        ExpVec f;
        for (int i = 0; i + shift < 4 && i < 4 - shift; ++i) f[i + shift] = e[i];
        out.add_term(f, c);
    }
    return out;
}

}  // namespace

TorusModel product_model(const std::vector<ConnectedBlock>& blocks) {
    TorusModel m;
    m.dim = 0;
    m.offset = 0;
    double lo = 0, hi = 0;
    RootList rl;
    LaurentPoly wp = LaurentPoly::constant(1, 1);
    double norm = 1;
    int shift = 0;
    for (const auto& b : blocks) {
        for (const ExpVec& r : positive_roots(b)) {
            std::array<double, 4> c{0, 0, 0, 0};
            for (int i = 0; i < b.rank; ++i) c[i + shift] = r[i];
            rl.roots.push_back(c);
        }
        norm *= weyl_order(b).get_d();
        auto [blo, bhi] = block_support(b);
        lo += blo;
        hi += bhi;
        if (b.kind == BlockKind::SOOdd) m.offset += 1;
        if (shift == 0 && wp.term_count() == 1) {
            wp = lift(weyl_weight(b), 0, 0);
        } else {
            wp = wp * lift(weyl_weight(b), 0, shift);
        }
        shift += b.rank;
        if (shift > 4) throw std::length_error("product_model: torus rank > 4");
    }
    m.dim = shift;
    rl.dim = shift;
    // rebuild joint weight poly with the right variable count
    LaurentPoly joint(shift);
    for (const auto& [e, c] : wp.terms()) joint.add_term(e, c);
    m.wpoly = joint;
    m.weight = [rl](const double* th) { return rl(th); };
    m.norm = norm;
    m.lo = lo;
    m.hi = hi;
    return m;
}

TorusModel coset_model(int mrank) {
    if (mrank < 2) throw std::invalid_argument("coset_model: m >= 2 required");
    TorusModel m;
    m.dim = mrank - 1;
    m.offset = 0;
    m.wpoly = coset_weight(mrank);
    m.norm = m.wpoly.constant_term().get_d();
    int d = m.dim;
    m.weight = [d](const double* th) {
        double w = 1;
        for (int j = 0; j < d; ++j)
            for (int k = j + 1; k < d; ++k) {
                double diff = 2 * std::cos(th[j]) - 2 * std::cos(th[k]);
                w *= diff * diff;
            }
        for (int j = 0; j < d; ++j) w *= 2 - 2 * std::cos(2 * th[j]);
        return w;
    };
    auto [lo, hi] = coset_support(mrank);
    m.lo = lo;
    m.hi = hi;
    return m;
}

std::pair<double, double> trace_support(const GroupSpec& spec) {
    if (spec.coset_only) {
        auto [lo, hi] = coset_support(spec.blocks[0].rank);
        return {double(lo), double(hi)};
    }
    double lo = 0, hi = 0;
    bool first = true;
    double blo = 0, bhi = 0;
    for (const auto& b : spec.blocks) {
        auto [l, h] = block_support(b);
        blo += l;
        bhi += h;
    }
    for (const auto& comp : spec.components) {
        double clo = 0, chi = 0;
        switch (comp.behaviour) {
            case TraceBehaviour::Full: clo = blo; chi = bhi; break;
            case TraceBehaviour::Mirrored: clo = -bhi; chi = -blo; break;
            case TraceBehaviour::TwistedCoset: {
                auto [l, h] = coset_support(spec.blocks[0].rank);
                clo = l;
                chi = h;
                break;
            }
            case TraceBehaviour::AtomAtZero: continue;
        }
        if (first) {
            lo = clo;
            hi = chi;
            first = false;
        } else {
            lo = std::min(lo, clo);
            hi = std::max(hi, chi);
        }
    }
    if (first) return {0, 0};  // atoms only
    return {lo, hi};
}

namespace {

/// Recursive adaptive Simpson on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15 * tol)
        return left + right + delta / 15;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int depth = 28) {
    if (b <= a) return 0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// Integrate f over [a, b] where f may blow up like an inverse square root
/// at either endpoint: substitute theta = m + r sin(phi).
double integrate_endpoint_singular(const std::function<double(double)>& f, double a,
                                   double b, double tol) {
    if (b <= a) return 0;
    double mid = 0.5 * (a + b), r = 0.5 * (b - a);
    auto g = [&](double phi) {
        double c = std::cos(phi);
        if (c <= 0) return 0.0;
        return f(mid + r * std::sin(phi)) * r * c;
    };
    return integrate(g, -kPi / 2, kPi / 2, tol);
}

/// Branch sum over the solved last angle, divided by 2|sin theta*|.
double branch_sum(const TorusModel& model, const double* th_free, double v) {
    if (std::fabs(v) >= 2) return 0;
    double ct = v / 2;
    double st = std::sqrt(std::max(0.0, 1 - ct * ct));
    if (st < 1e-13) return 0;
    double th[4];
    for (int i = 0; i < model.dim - 1; ++i) th[i] = th_free[i];
    double theta = std::acos(ct);
    th[model.dim - 1] = theta;
    double w = model.weight(th);
    th[model.dim - 1] = -theta;
    w += model.weight(th);
    return w / (2 * st);
}

/// Points in [0, 2pi) where the last-angle branch degenerates.
std::vector<double> breakpoints(double vbase) {
    std::vector<double> pts{0, 2 * kPi};
    for (double s : {-2.0, 2.0}) {
        double c = (vbase - s) / 2;  // cos(theta) at which v = s
        if (c > -1 && c < 1) {
            double t = std::acos(c);
            pts.push_back(t);
            pts.push_back(2 * kPi - t);
        }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

/// Integral over theta (one free angle) of branch_sum with the given
/// earlier angles fixed.
double free_angle_integral(const TorusModel& model, const double* th_before,
                           int nbefore, double u, double tol) {
    double acc = 0;
    for (int i = 0; i < nbefore; ++i) acc += 2 * std::cos(th_before[i]);
    double vbase = u - acc;  // v = vbase - 2 cos(theta)
    auto f = [&](double theta) {
        double th[4];
        for (int i = 0; i < nbefore; ++i) th[i] = th_before[i];
        th[nbefore] = theta;
        return branch_sum(model, th, vbase - 2 * std::cos(theta));
    };
    std::vector<double> pts = breakpoints(vbase);
    double total = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate_endpoint_singular(f, pts[i], pts[i + 1],
                                             tol / double(pts.size() - 1));
    return total;
}

}  // namespace

double levelset_density(const TorusModel& model, double x, double tol) {
    double u = x - model.offset;
    double twopi = 2 * kPi;
    double scale = 1.0 / (model.norm * std::pow(twopi, model.dim));
    switch (model.dim) {
        case 1:
            return branch_sum(model, nullptr, u) * scale;
        case 2: {
            double inner_tol = tol / scale / 4;
            return free_angle_integral(model, nullptr, 0, u, inner_tol) * scale;
        }
        case 3: {
            double inner_scale = scale * 2;  // [0,pi] doubled for theta_0
            double inner_tol = (tol / inner_scale) / (2 * kPi * 8);
            auto outer = [&](double th0) {
                double th[4] = {th0, 0, 0, 0};
                return free_angle_integral(model, th, 1, u, inner_tol);
            };
            double val = integrate(outer, 0, kPi, tol / inner_scale / 4);
            return val * inner_scale;
        }
        default:
            throw std::length_error("levelset_density: torus dimension > 3");
    }
}

std::vector<double> levelset_density(const TorusModel& model,
                                     const std::vector<double>& xs, double tol) {
    std::vector<double> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = levelset_density(model, xs[i], tol);
    return out;
}

namespace {

/// Weight grouped by the exponent of the last variable. A_k(theta') is the
/// real part of sum over terms with last exponent k; conjugate pairs across
/// +-k make  A_0 J_0 + sum_{k>=1} 2 A_k J_k  the analytic last-angle
/// integral of the weight over a sublevel interval.
struct GroupedWeight {
    int dfree;  // number of free variables
    int kmax;
    // per k: list of (free exponents, coefficient)
    std::vector<std::vector<std::pair<std::array<int, 3>, double>>> groups;

    void eval(const double* th, double* A) const {
        for (int k = 0; k <= kmax; ++k) {
            double re = 0;
            for (const auto& [e, c] : groups[k]) {
                double ang = 0;
                for (int i = 0; i < dfree; ++i) ang += e[i] * th[i];
                re += c * std::cos(ang);
            }
            A[k] = re;
        }
    }
};

GroupedWeight group_by_last(const LaurentPoly& w, int dim) {
    GroupedWeight g;
    g.dfree = dim - 1;
    g.kmax = w.degree_range(dim - 1);
    g.groups.resize(g.kmax + 1);
    for (const auto& [e, c] : w.terms()) {
        int k = e[dim - 1];
        std::array<int, 3> fe{0, 0, 0};
        for (int i = 0; i < dim - 1; ++i) fe[i] = e[i];
        if (k >= 0) g.groups[k].push_back({fe, c.get_d()});
        // negative-k terms are the conjugates of positive-k ones; they are
        // accounted for by the factor 2 on A_k, so only fold k = 0 fully
    }
    return g;
}

/// J_k(beta) = integral of e^{ik theta} over [beta, 2pi - beta].
void sublevel_intervals(double beta, int kmax, double* J) {
    J[0] = 2 * kPi - 2 * beta;
    double sb = std::sin(beta), cb = std::cos(beta);
    double skm1 = 0, sk = sb;  // sin(0), sin(beta)
    for (int k = 1; k <= kmax; ++k) {
        J[k] = -2 * sk / k;
        double skp1 = 2 * cb * sk - skm1;
        skm1 = sk;
        sk = skp1;
    }
}

}  // namespace

std::vector<double> sublevel_cdf(const TorusModel& model, const std::vector<double>& xs,
                                 int grid) {
    GroupedWeight gw = group_by_last(model.wpoly, model.dim);
    int kmax = gw.kmax;
    std::vector<double> A(kmax + 1), J(kmax + 1);
    std::vector<double> F(xs.size(), 0);
    double twopi = 2 * kPi;

    auto accumulate = [&](const double* th, double wq) {
        gw.eval(th, A.data());
        double base = 0;
        for (int i = 0; i < model.dim - 1; ++i) base += 2 * std::cos(th[i]);
        for (size_t ix = 0; ix < xs.size(); ++ix) {
            double v = xs[ix] - model.offset - base;
            double beta = std::acos(std::clamp(v / 2, -1.0, 1.0));
            sublevel_intervals(beta, kmax, J.data());
            double inner = A[0] * J[0];
            for (int k = 1; k <= kmax; ++k) inner += 2 * A[k] * J[k];
            F[ix] += wq * inner;
        }
    };

    if (model.dim == 1) {
        double th = 0;
        accumulate(&th, 1.0);
        for (auto& v : F) v /= twopi * model.norm;
        return F;
    }
    if (grid == 0) grid = model.dim == 2 ? 4096 : 360;
    if (model.dim == 2) {
        double h = twopi / grid;
        for (int i = 0; i < grid; ++i) {
            double th = i * h;
            accumulate(&th, h);
        }
        for (auto& v : F) v /= twopi * twopi * model.norm;
        return F;
    }
    if (model.dim == 3) {
        double h = twopi / grid;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                double th[2] = {i * h, j * h};
                accumulate(th, h * h);
            }
        for (auto& v : F) v /= twopi * twopi * twopi * model.norm;
        return F;
    }
    throw std::length_error("sublevel_cdf: torus dimension > 3");
}

namespace {

struct ComponentModels {
    // (model, mirrored) for each continuous component
    std::vector<std::pair<TorusModel, bool>> models;
    int atom_components = 0;
    int total = 0;
};

ComponentModels component_models(const GroupSpec& spec) {
    ComponentModels cm;
    if (spec.coset_only) {
        cm.models.emplace_back(coset_model(spec.blocks[0].rank), false);
        cm.total = 1;
        return cm;
    }
    cm.total = int(spec.components.size());
    TorusModel base;
    bool have_base = false;
    for (const auto& comp : spec.components) {
        switch (comp.behaviour) {
            case TraceBehaviour::Full:
            case TraceBehaviour::Mirrored:
                if (!have_base) {
                    base = product_model(spec.blocks);
                    have_base = true;
                }
                cm.models.emplace_back(base, comp.behaviour == TraceBehaviour::Mirrored);
                break;
            case TraceBehaviour::TwistedCoset:
                cm.models.emplace_back(coset_model(spec.blocks[0].rank), false);
                break;
            case TraceBehaviour::AtomAtZero:
                ++cm.atom_components;
                break;
        }
    }
    return cm;
}

}  // namespace

DensityCurve mixture_density(const GroupSpec& spec, int grid_points, double tol) {
    DensityCurve dc;
    auto [lo, hi] = trace_support(spec);
    dc.lo = lo;
    dc.hi = hi;
    ComponentModels cm = component_models(spec);
    double w = 1.0 / cm.total;

    double step = (hi - lo) / (grid_points + 1);
    dc.xs.resize(grid_points);
    dc.values.assign(grid_points, 0.0);
    for (int i = 0; i < grid_points; ++i) dc.xs[i] = lo + step * (i + 1);

    for (const auto& [model, mirrored] : cm.models) {
        for (int i = 0; i < grid_points; ++i) {
            double x = mirrored ? -dc.xs[i] : dc.xs[i];
            if (x < model.lo - 1e-12 || x > model.hi + 1e-12) continue;
            dc.values[i] += w * levelset_density(model, x, tol);
        }
    }
    if (cm.atom_components > 0) {
        Rational mass(cm.atom_components, cm.total);
        mass.canonicalize();
        dc.atoms.emplace_back(0.0, mass);
    }
    // continuous mass via the analytic sublevel integral at the right edge
    double mass = 0;
    for (const auto& [model, mirrored] : cm.models) {
        (void)mirrored;
        std::vector<double> f = sublevel_cdf(model, {model.hi + 1});
        mass += w * f[0];
    }
    dc.continuous_mass = mass;
    return dc;
}

namespace {

double interp_uniform(const std::vector<double>& xs, const std::vector<double>& ys,
                      double x) {
    if (xs.empty()) return 0;
    if (x <= xs.front()) return 0;
    if (x >= xs.back()) return ys.back();
    size_t i = size_t((x - xs.front()) / (xs[1] - xs[0]));
    i = std::min(i, xs.size() - 2);
    double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] * (1 - t) + ys[i + 1] * t;
}

}  // namespace

double MixtureCdf::eval(double x) const {
    double f = interp_uniform(xs, cont, x);
    if (x >= 0) f += atom_at_zero;
    return f;
}

double MixtureCdf::eval_left(double x) const {
    double f = interp_uniform(xs, cont, x);
    if (x > 0) f += atom_at_zero;
    return f;
}

MixtureCdf mixture_cdf(const GroupSpec& spec, int grid_points) {
    MixtureCdf out;
    auto [lo, hi] = trace_support(spec);
    lo -= 1e-9;
    hi += 1e-9;
    ComponentModels cm = component_models(spec);
    double w = 1.0 / cm.total;
    out.atom_at_zero = double(cm.atom_components) * w;
    out.xs.resize(grid_points);
    out.cont.assign(grid_points, 0.0);
    double step = (hi - lo) / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) out.xs[i] = lo + i * step;

    for (const auto& [model, mirrored] : cm.models) {
        std::vector<double> q(grid_points);
        if (!mirrored) {
            std::vector<double> F = sublevel_cdf(model, out.xs);
            for (int i = 0; i < grid_points; ++i) q[i] = F[i];
        } else {
            std::vector<double> neg(grid_points);
            for (int i = 0; i < grid_points; ++i) neg[i] = -out.xs[i];
            std::vector<double> F = sublevel_cdf(model, neg);
            for (int i = 0; i < grid_points; ++i) q[i] = 1.0 - F[i];
        }
        for (int i = 0; i < grid_points; ++i) out.cont[i] += w * q[i];
    }
    return out;
}

}  // namespace k3trace
