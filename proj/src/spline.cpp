#include "k3trace/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace k3trace {

namespace {

using Mat = std::vector<Rational>;  // row-major

Mat mat_mul(const Mat& A, const Mat& B, size_t n, size_t m, size_t k) {
    // (n x m) * (m x k)
    Mat C(n * k, Rational(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) {
            if (A[i * m + j] == 0) continue;
            const Rational& a = A[i * m + j];
            for (size_t l = 0; l < k; ++l) C[i * k + l] += a * B[j * k + l];
        }
    return C;
}

bool gauss_solve(Mat A, std::vector<Rational> rhs, std::vector<Rational>& x) {
    size_t n = rhs.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv * n + col] == 0) ++piv;
        if (piv == n) return false;
        if (piv != col) {
            for (size_t j = col; j < n; ++j) std::swap(A[col * n + j], A[piv * n + j]);
            std::swap(rhs[col], rhs[piv]);
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r * n + col] == 0) continue;
            Rational f = A[r * n + col] / A[col * n + col];
            for (size_t j = col; j < n; ++j) A[r * n + j] -= f * A[col * n + j];
            rhs[r] -= f * rhs[col];
        }
    }
    x.resize(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = rhs[i] / A[i * n + i];
        x[i].canonicalize();
    }
    return true;
}

/// Map from knot values to knot second derivatives of the natural cubic
/// spline: rows of T sigma = B v with T tridiagonal.
Mat natural_spline_map(int P, const Rational& h) {
    size_t n = P + 1;
    Mat T(n * n, Rational(0)), B(n * n, Rational(0));
    T[0] = 1;
    T[n * n - 1] = 1;
    Rational h6 = h / 6, h23 = h * 2 / 3;
    Rational ih(h);
    ih = 1 / h;
    for (size_t i = 1; i + 1 < n; ++i) {
        T[i * n + (i - 1)] = h6;
        T[i * n + i] = h23;
        T[i * n + (i + 1)] = h6;
        B[i * n + (i - 1)] = ih;
        B[i * n + i] = -2 * ih;
        B[i * n + (i + 1)] = ih;
    }
    // S = T^-1 B, column by column
    Mat S(n * n, Rational(0));
    for (size_t c = 0; c < n; ++c) {
        std::vector<Rational> rhs(n), x;
        for (size_t r = 0; r < n; ++r) rhs[r] = B[r * n + c];
        if (!gauss_solve(T, rhs, x)) throw std::runtime_error("natural spline system singular");
        for (size_t r = 0; r < n; ++r) S[r * n + c] = x[r];
    }
    return S;
}

struct Basis {
    // per piece, cubic coefficients in t of the four hat contributions
    // s(t) = v_i (1 - t) + v_{i+1} t + sig_i c(t) + sig_{i+1} d(t)
    // with c = h^2/6 (-2t + 3t^2 - t^3), d = h^2/6 (t^3 - t)
    std::array<Rational, 4> vi, vi1, si, si1;
};

Basis piece_basis(const Rational& h) {
    Basis b;
    Rational h26 = h * h / 6;
    b.vi = {Rational(1), Rational(-1), Rational(0), Rational(0)};
    b.vi1 = {Rational(0), Rational(1), Rational(0), Rational(0)};
    b.si = {Rational(0), -2 * h26, 3 * h26, -h26};
    b.si1 = {Rational(0), -h26, Rational(0), h26};
    return b;
}

}  // namespace

SplineDensity spline_from_moments(const std::vector<Rational>& moments,
                                  std::pair<Rational, Rational> support, int pieces) {
    if (moments.empty()) throw std::invalid_argument("spline_from_moments: no moments");
    int K = int(moments.size()) - 1;
    if (K < 20 || K > 35)
        throw std::invalid_argument("spline_from_moments: K must lie in [20, 35]");
    if (pieces < 4) throw std::invalid_argument("spline_from_moments: too few pieces");
    const Rational& m0 = moments[0];
    if (m0 <= 0) throw std::invalid_argument("spline_from_moments: nonpositive mass");
    // point-mass detection: zero variance relative to the mass
    Rational var = moments[2] * m0 - moments[1] * moments[1];
    if (var == 0)
        throw std::domain_error("spline_from_moments: input is an atom, not a density");
    Rational a = support.first, b = support.second;
    if (!(a < b)) throw std::invalid_argument("spline_from_moments: empty support");

    int P = pieces;
    size_t N = P + 1;
    Rational h = (b - a) / P;
    Mat S = natural_spline_map(P, h);
    Basis bs = piece_basis(h);

    // moment rows: M[n][j] with sigma folded through S
    size_t rows = K + 1;
    Mat Mv(rows * N, Rational(0));   // direct value part
    Mat Ms(rows * N, Rational(0));   // sigma part (before folding)
    // int_0^1 (x_i + h t)^n t^j dt = sum_l C(n,l) x_i^(n-l) h^l / (l+j+1)
    std::vector<Rational> xi(P);
    for (int i = 0; i < P; ++i) xi[i] = a + h * i;
    for (int n = 0; n <= K; ++n) {
        for (int i = 0; i < P; ++i) {
            // I[j] = int (x_i + h t)^n t^j dt, j = 0..3
            Rational I[4] = {Rational(0), Rational(0), Rational(0), Rational(0)};
            Rational xpow(1);
            std::vector<Rational> xpows(n + 1);
            for (int l = 0; l <= n; ++l) {
                xpows[l] = xpow;  // x_i^l
                xpow *= xi[i];
            }
            Rational hpow(1);
            for (int l = 0; l <= n; ++l) {
                Rational c = Rational(binomial(n, l)) * xpows[n - l] * hpow;
                for (int j = 0; j < 4; ++j) I[j] += c / (l + j + 1);
                hpow *= h;
            }
            for (int j = 0; j < 4; ++j) {
                Rational ci = h * I[j];
                Mv[n * N + i] += ci * bs.vi[j];
                Mv[n * N + i + 1] += ci * bs.vi1[j];
                Ms[n * N + i] += ci * bs.si[j];
                Ms[n * N + i + 1] += ci * bs.si1[j];
            }
        }
    }
    Mat M = mat_mul(Ms, S, rows, N, N);
    for (size_t i = 0; i < rows * N; ++i) M[i] += Mv[i];

    std::vector<Rational> v;
    if (rows == N) {
        if (!gauss_solve(M, moments, v))
            throw std::invalid_argument("spline_from_moments: singular square system");
    } else if (rows > N) {
        // least squares: normal equations M^T M v = M^T m
        Mat Mt(N * rows);
        for (size_t r = 0; r < rows; ++r)
            for (size_t c = 0; c < N; ++c) Mt[c * rows + r] = M[r * N + c];
        Mat MtM = mat_mul(Mt, M, N, rows, N);
        std::vector<Rational> rhs(N, Rational(0));
        for (size_t c = 0; c < N; ++c)
            for (size_t r = 0; r < rows; ++r) rhs[c] += Mt[c * rows + r] * moments[r];
        if (!gauss_solve(MtM, rhs, v))
            throw std::invalid_argument("spline_from_moments: rank-deficient least squares");
    } else {
        // minimum curvature subject to the moment constraints:
        // KKT [R M^T; M 0] [v; lam] = [0; m] with R = S^T Rq S
        Mat Rq(N * N, Rational(0));
        Rational h3 = h / 3, h6 = h / 6;
        for (int i = 0; i < P; ++i) {
            Rq[i * N + i] += h3;
            Rq[(i + 1) * N + i + 1] += h3;
            Rq[i * N + i + 1] += h6;
            Rq[(i + 1) * N + i] += h6;
        }
        Mat St(N * N);
        for (size_t r = 0; r < N; ++r)
            for (size_t c = 0; c < N; ++c) St[c * N + r] = S[r * N + c];
        Mat R = mat_mul(mat_mul(St, Rq, N, N, N), S, N, N, N);
        size_t dim = N + rows;
        Mat KKT(dim * dim, Rational(0));
        std::vector<Rational> rhs(dim, Rational(0));
        for (size_t r = 0; r < N; ++r)
            for (size_t c = 0; c < N; ++c) KKT[r * dim + c] = R[r * N + c];
        for (size_t r = 0; r < rows; ++r)
            for (size_t c = 0; c < N; ++c) {
                KKT[(N + r) * dim + c] = M[r * N + c];
                KKT[c * dim + N + r] = M[r * N + c];
            }
        for (size_t r = 0; r < rows; ++r) rhs[N + r] = moments[r];
        std::vector<Rational> sol;
        if (!gauss_solve(KKT, rhs, sol))
            throw std::invalid_argument("spline_from_moments: singular KKT system");
        v.assign(sol.begin(), sol.begin() + N);
    }

    SplineDensity sd;
    sd.a = a;
    sd.b = b;
    sd.pieces = P;
    sd.K = K;
    sd.values = v;
    sd.sigma.assign(N, Rational(0));
    for (size_t r = 0; r < N; ++r) {
        Rational acc(0);
        for (size_t c = 0; c < N; ++c) acc += S[r * N + c] * v[c];
        acc.canonicalize();
        sd.sigma[r] = acc;
    }

    // residual (nonzero only in the least-squares regime) and undershoot
    double resid = 0;
    for (int n = 0; n <= K; ++n) {
        Rational rn(0);
        for (size_t c = 0; c < N; ++c) rn += M[n * N + c] * v[c];
        rn -= moments[n];
        resid = std::max(resid, std::abs(rn.get_d()));
    }
    sd.max_moment_residual = resid;
    double mn = 0;
    int samples = 10 * P;
    double da = a.get_d(), db = b.get_d();
    for (int i = 0; i <= samples; ++i) {
        double x = da + (db - da) * i / samples;
        mn = std::min(mn, sd.eval(x));
    }
    sd.min_value = mn;
    return sd;
}

double SplineDensity::eval(double x) const {
    double da = a.get_d(), db = b.get_d();
    if (x < da || x > db) return 0;
    double hd = (db - da) / pieces;
    int i = std::min(int((x - da) / hd), pieces - 1);
    double t = (x - (da + i * hd)) / hd;
    double vi = values[i].get_d(), vi1 = values[i + 1].get_d();
    double si = sigma[i].get_d(), si1 = sigma[i + 1].get_d();
    double h26 = hd * hd / 6;
    double u = 1 - t;
    return vi * u + vi1 * t + si * h26 * (u * u * u - u) + si1 * h26 * (t * t * t - t);
}

Rational SplineDensity::moment(int n) const {
    Rational h = (b - a) / pieces;
    Basis bs = piece_basis(h);
    Rational total(0);
    for (int i = 0; i < pieces; ++i) {
        Rational xi = a + h * i;
        Rational I[4] = {Rational(0), Rational(0), Rational(0), Rational(0)};
        std::vector<Rational> xpows(n + 1);
        Rational xpow(1);
        for (int l = 0; l <= n; ++l) {
            xpows[l] = xpow;
            xpow *= xi;
        }
        Rational hpow(1);
        for (int l = 0; l <= n; ++l) {
            Rational c = Rational(binomial(n, l)) * xpows[n - l] * hpow;
            for (int j = 0; j < 4; ++j) I[j] += c / (l + j + 1);
            hpow *= h;
        }
        for (int j = 0; j < 4; ++j) {
            Rational contrib = bs.vi[j] * values[i] + bs.vi1[j] * values[i + 1] +
                               bs.si[j] * sigma[i] + bs.si1[j] * sigma[i + 1];
            total += h * I[j] * contrib;
        }
    }
    total.canonicalize();
    return total;
}

}  // namespace k3trace
