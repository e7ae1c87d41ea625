#include "conex/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace conex {

namespace {
constexpr double kPi = std::numbers::pi;

// Equation for w at one node: d^2 w'' - 2 m d d' w' + q w - c2 w^p = 0 with
// q = m(m+1)(d')^2 - m d d'' + m^2 d^2, m = (n-2)/2, c2 = n(n-2)/4.
struct NodeCoeffs {
    double d, d1, d2, q;
};

std::vector<NodeCoeffs> node_coeffs(const ConeSpec& cone, const Grid1D& grid) {
    const double m = 0.5 * (cone.n - 2);
    std::vector<NodeCoeffs> c(static_cast<size_t>(grid.count));
    for (int i = 0; i < grid.count; ++i) {
        const double th = grid.node(i);
        NodeCoeffs& nc = c[static_cast<size_t>(i)];
        nc.d = defining_distance(th, cone.alpha);
        nc.d1 = defining_distance_d1(th, cone.alpha);
        nc.d2 = defining_distance_d2(th, cone.alpha);
        nc.q = m * (m + 1) * nc.d1 * nc.d1 - m * nc.d * nc.d2 + m * m * nc.d * nc.d;
    }
    return c;
}

// Rows are scaled by h^2/(d^2 + h^2) so the max-norm residual has an O(eps)
// floor independent of the grid count.
double row_scale(double d, double h) { return h * h / (d * d + h * h); }

void residual_vec(const ConeSpec& cone, const Grid1D& grid, const std::vector<NodeCoeffs>& nc,
                  std::span<const double> w, std::vector<double>& G) {
    const int N = grid.count;
    const double h = grid.spacing;
    const double m = 0.5 * (cone.n - 2);
    const double c2 = 0.25 * cone.n * (cone.n - 2);
    const double p = static_cast<double>(cone.n + 2) / (cone.n - 2);
    G.assign(static_cast<size_t>(N), 0.0);
    G[0] = w[0] - 1.0;
    G[static_cast<size_t>(N - 1)] = w[static_cast<size_t>(N - 1)] - 1.0;
    for (int i = 1; i < N - 1; ++i) {
        const auto& c = nc[static_cast<size_t>(i)];
        const double wpp = (w[i - 1] - 2.0 * w[i] + w[i + 1]) / (h * h);
        const double wp = (w[i + 1] - w[i - 1]) / (2.0 * h);
        G[static_cast<size_t>(i)] =
            row_scale(c.d, h) *
            (c.d * c.d * wpp - 2.0 * m * c.d * c.d1 * wp + c.q * w[i] - c2 * std::pow(w[i], p));
    }
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Thomas solve of a tridiagonal system (lo, di, up), overwrites rhs.
void tridiag_solve(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up,
                   std::vector<double>& rhs) {
    const size_t n = di.size();
    for (size_t i = 1; i < n; ++i) {
        const double f = lo[i] / di[i - 1];
        di[i] -= f * up[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    rhs[n - 1] /= di[n - 1];
    for (size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}
} // namespace

void ConeSpec::validate() const {
    if (n < 2) throw std::domain_error("cone: n must be >= 2");
    if (k < 2 || k > std::max(n, 2)) throw std::domain_error("cone: need 2 <= k <= n");
    if (!(alpha > 0.0) || alpha >= 2.0 * kPi)
        throw std::domain_error("cone: alpha must lie in (0, 2*pi)");
    if (!(M > 0.0)) throw std::domain_error("cone: M must be positive");
}

double defining_distance(double theta, double alpha) {
    return alpha / kPi * std::sin(kPi * theta / alpha);
}

double defining_distance_d1(double theta, double alpha) {
    return std::cos(kPi * theta / alpha);
}

double defining_distance_d2(double theta, double alpha) {
    return -kPi / alpha * std::sin(kPi * theta / alpha);
}

ProfileSolution solve_profile(const ConeSpec& cone, const Grid1D& grid) {
    cone.validate();
    if (cone.n < 3) throw std::domain_error("solve_profile: n must be >= 3");
    if (cone.k != 2) throw std::domain_error("solve_profile: only the k = 2 arc is supported");
    if (std::abs(grid.length - cone.alpha) > 1e-12)
        throw std::invalid_argument("solve_profile: grid length must equal alpha");

    const int N = grid.count;
    const double h = grid.spacing;
    const double m = 0.5 * (cone.n - 2);
    const double c2 = 0.25 * cone.n * (cone.n - 2);
    const double p = static_cast<double>(cone.n + 2) / (cone.n - 2);
    const auto nc = node_coeffs(cone, grid);

    std::vector<double> w(static_cast<size_t>(N), 1.0), G, Gtrial;
    residual_vec(cone, grid, nc, w, G);
    double res = max_abs(G);

    std::vector<double> lo(static_cast<size_t>(N)), di(static_cast<size_t>(N)),
        up(static_cast<size_t>(N)), rhs(static_cast<size_t>(N));
    int step = 0;
    for (; step < 100 && res > 1e-12; ++step) {
        // Jacobian rows; boundary rows pin w = 1 at the first and last cells.
        lo[0] = 0.0; di[0] = 1.0; up[0] = 0.0;
        lo[static_cast<size_t>(N - 1)] = 0.0;
        di[static_cast<size_t>(N - 1)] = 1.0;
        up[static_cast<size_t>(N - 1)] = 0.0;
        for (int i = 1; i < N - 1; ++i) {
            const auto& c = nc[static_cast<size_t>(i)];
            const double dd = c.d * c.d;
            const double s = row_scale(c.d, h);
            lo[static_cast<size_t>(i)] = s * (dd / (h * h) + m * c.d * c.d1 / h);
            up[static_cast<size_t>(i)] = s * (dd / (h * h) - m * c.d * c.d1 / h);
            di[static_cast<size_t>(i)] =
                s * (-2.0 * dd / (h * h) + c.q - c2 * p * std::pow(w[i], p - 1.0));
        }
        for (int i = 0; i < N; ++i) rhs[static_cast<size_t>(i)] = -G[static_cast<size_t>(i)];
        tridiag_solve(lo, di, up, rhs);

        double damp = 1.0;
        bool accepted = false;
        std::vector<double> wtrial(static_cast<size_t>(N));
        for (int half = 0; half < 40; ++half) {
            bool positive = true;
            for (int i = 0; i < N; ++i) {
                wtrial[static_cast<size_t>(i)] = w[i] + damp * rhs[static_cast<size_t>(i)];
                if (wtrial[static_cast<size_t>(i)] <= 0.0) positive = false;
            }
            if (positive) {
                residual_vec(cone, grid, nc, wtrial, Gtrial);
                if (max_abs(Gtrial) < res) {
                    w.swap(wtrial);
                    G.swap(Gtrial);
                    res = max_abs(G);
                    accepted = true;
                    break;
                }
            }
            damp *= 0.5;
        }
        if (!accepted) break;
    }
    if (res > 1e-10)
        throw std::runtime_error("profile diverged: residual " + std::to_string(res) + " after " +
                                 std::to_string(step) + " damped steps");

    ProfileSolution sol;
    sol.cone = cone;
    sol.grid = grid;
    sol.w = w;
    sol.residual = res;
    sol.newton_steps = step;
    sol.u_S.resize(static_cast<size_t>(N));
    double sigma = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
        const double u = std::pow(nc[static_cast<size_t>(i)].d, -m) * w[static_cast<size_t>(i)];
        sol.u_S[static_cast<size_t>(i)] = u;
        sigma = std::min(sigma, std::pow(u, 4.0 / (cone.n - 2)));
    }
    sol.sigma = sigma;

    // Edge expansion of w in d_S up to degree n-1; the leading 1 is the
    // normalization, the rest is a least-squares fit over the near-edge cells.
    sol.c_S = PolyLogSeries(static_cast<double>(cone.n - 1));
    sol.c_S.add_term(0.0, 0, 1.0);
    {
        const int deg = std::min(cone.n - 1, 4);
        std::vector<double> ds, y;
        for (int i = 0; i < N; ++i) {
            const double th = grid.node(i);
            if (th < 0.15 * cone.alpha && th > 1.5 * h) {
                ds.push_back(nc[static_cast<size_t>(i)].d);
                y.push_back(w[static_cast<size_t>(i)] - 1.0);
            }
        }
        if (static_cast<int>(ds.size()) > 4 * deg && deg >= 1) {
            // normal equations for y ~ sum_{q=1..deg} c_q d^q
            std::vector<std::vector<double>> A(static_cast<size_t>(deg),
                                               std::vector<double>(static_cast<size_t>(deg), 0.0));
            std::vector<double> b(static_cast<size_t>(deg), 0.0);
            for (size_t s = 0; s < ds.size(); ++s)
                for (int qi = 0; qi < deg; ++qi) {
                    b[static_cast<size_t>(qi)] += std::pow(ds[s], qi + 1) * y[s];
                    for (int qj = 0; qj < deg; ++qj)
                        A[static_cast<size_t>(qi)][static_cast<size_t>(qj)] +=
                            std::pow(ds[s], qi + 1) * std::pow(ds[s], qj + 1);
                }
            // Gaussian elimination with partial pivoting
            std::vector<int> piv(static_cast<size_t>(deg));
            for (int col = 0; col < deg; ++col) {
                int best = col;
                for (int r = col + 1; r < deg; ++r)
                    if (std::abs(A[static_cast<size_t>(r)][static_cast<size_t>(col)]) >
                        std::abs(A[static_cast<size_t>(best)][static_cast<size_t>(col)]))
                        best = r;
                std::swap(A[static_cast<size_t>(col)], A[static_cast<size_t>(best)]);
                std::swap(b[static_cast<size_t>(col)], b[static_cast<size_t>(best)]);
                for (int r = col + 1; r < deg; ++r) {
                    const double f = A[static_cast<size_t>(r)][static_cast<size_t>(col)] /
                                     A[static_cast<size_t>(col)][static_cast<size_t>(col)];
                    for (int cc = col; cc < deg; ++cc)
                        A[static_cast<size_t>(r)][static_cast<size_t>(cc)] -=
                            f * A[static_cast<size_t>(col)][static_cast<size_t>(cc)];
                    b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
                }
            }
            for (int r = deg; r-- > 0;) {
                for (int cc = r + 1; cc < deg; ++cc)
                    b[static_cast<size_t>(r)] -=
                        A[static_cast<size_t>(r)][static_cast<size_t>(cc)] * b[static_cast<size_t>(cc)];
                b[static_cast<size_t>(r)] /= A[static_cast<size_t>(r)][static_cast<size_t>(r)];
            }
            for (int qd = 1; qd <= deg; ++qd)
                sol.c_S.add_term(static_cast<double>(qd), 0, b[static_cast<size_t>(qd - 1)]);
        }
    }
    return sol;
}

double profile_residual(const ConeSpec& cone, const Grid1D& grid, std::span<const double> w) {
    const auto nc = node_coeffs(cone, grid);
    std::vector<double> G;
    residual_vec(cone, grid, nc, w, G);
    return max_abs(G);
}

double halfplane_oracle(int n, double theta) {
    if (n < 3) throw std::domain_error("halfplane_oracle: n must be >= 3");
    if (!(theta > 0.0 && theta < kPi))
        throw std::domain_error("halfplane_oracle: theta must lie in (0, pi)");
    return std::pow(std::sin(theta), -0.5 * (n - 2));
}

double ball_barrier(int n, double M, double x_norm) {
    if (n < 3) throw std::domain_error("ball_barrier: n must be >= 3");
    if (!(M > 0.0)) throw std::domain_error("ball_barrier: M must be positive");
    if (!(x_norm >= 0.0 && x_norm < M))
        throw std::domain_error("ball_barrier: x_norm must lie in [0, M)");
    return std::pow(2.0 * M / (M * M - x_norm * x_norm), 0.5 * (n - 2));
}

double comparison_bound(int n, double M) {
    if (n < 3) throw std::domain_error("comparison_bound: n must be >= 3");
    if (!(M > 0.0)) throw std::domain_error("comparison_bound: M must be positive");
    return std::pow(4.0 / M, 0.5 * (n - 2));
}

bool admissible_beta(int n, double sigma, double beta) {
    if (!(sigma > 0.0)) throw std::domain_error("admissible_beta: sigma must be positive");
    if (!(beta > 0.0)) throw std::domain_error("admissible_beta: beta must be positive");
    return beta * (n + beta - 2.0) - 0.25 * n * (n + 2.0) * sigma < 0.0;
}

double max_beta(int n, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("max_beta: sigma must be positive");
    const double b = static_cast<double>(n - 2);
    const double c = 0.25 * n * (n + 2.0) * sigma;
    return 0.5 * (-b + std::sqrt(b * b + 4.0 * c));
}

} // namespace conex
