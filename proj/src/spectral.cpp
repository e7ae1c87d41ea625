#include "conex/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace conex {

namespace {
constexpr double kPi = std::numbers::pi;

struct EigenPair {
    double lambda;
    std::vector<double> y; // standard-form eigenvector
};

std::pair<double, double> gershgorin(const Tridiag& C) {
    const size_t n = C.diag.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(C.off[i - 1]);
        if (i + 1 < n) r += std::abs(C.off[i]);
        lo = std::min(lo, C.diag[i] - r);
        hi = std::max(hi, C.diag[i] + r);
    }
    return {lo, hi};
}

// Factor (C - sigma I) with partial pivoting and solve; tridiagonal LU with
// one fill diagonal (gttrf/gttrs layout).
struct ShiftedLU {
    std::vector<double> dl, d, du, du2;
    std::vector<int> piv;

    ShiftedLU(const Tridiag& C, double sigma) {
        const size_t n = C.diag.size();
        dl.assign(n, 0.0);
        d.resize(n);
        du.assign(n, 0.0);
        du2.assign(n, 0.0);
        piv.assign(n, 0);
        for (size_t i = 0; i < n; ++i) d[i] = C.diag[i] - sigma;
        for (size_t i = 0; i + 1 < n; ++i) {
            dl[i] = C.off[i];
            du[i] = C.off[i];
        }
        for (size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] == 0.0) d[i] = 1e-300;
                const double f = dl[i] / d[i];
                dl[i] = f;
                d[i + 1] -= f * du[i];
                piv[i] = 0;
            } else {
                const double f = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = f;
                const double tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - f * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du[i + 1];
                }
                piv[i] = 1;
            }
        }
        if (d[n - 1] == 0.0) d[n - 1] = 1e-300;
    }

    void solve(std::vector<double>& b) const {
        const size_t n = d.size();
        for (size_t i = 0; i + 1 < n; ++i) {
            if (piv[i] == 0) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (size_t j = n - 2; j-- > 0;)
            b[j] = (b[j] - du[j] * b[j + 1] - du2[j] * b[j + 2]) / d[j];
    }
};

double apply_resid(const Tridiag& C, double lam, const std::vector<double>& y) {
    const size_t n = C.diag.size();
    double r = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double v = (C.diag[i] - lam) * y[i];
        if (i > 0) v += C.off[i - 1] * y[i - 1];
        if (i + 1 < n) v += C.off[i] * y[i + 1];
        r = std::max(r, std::abs(v));
    }
    return r;
}

EigenPair eigenpair(const Tridiag& C, const Grid1D& grid, int index, double glo, double ghi,
                    double scale) {
    // bisection for the (index+1)-th eigenvalue
    double lo = glo, hi = ghi;
    for (int it = 0; it < 200; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count_below(C, mid) <= index)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * std::max(std::abs(lo), std::abs(hi)) + 1e-300) break;
    }
    const double lam = lo + 0.5 * (hi - lo);

    // inverse iteration with a deterministic start matching the mode count
    const size_t n = C.diag.size();
    std::vector<double> y(n);
    for (size_t j = 0; j < n; ++j)
        y[j] = std::sin((index + 1) * kPi * grid.nodes[j] / grid.length);
    const double sigma = lam + std::max(std::abs(lam), 1.0) * 1e-11;
    ShiftedLU lu(C, sigma);
    for (int it = 0; it < 4; ++it) {
        lu.solve(y);
        double mx = 0.0;
        for (double v : y) mx = std::max(mx, std::abs(v));
        if (mx == 0.0) throw std::runtime_error("inverse iteration breakdown at index " +
                                                std::to_string(index + 1));
        for (double& v : y) v /= mx;
    }
    if (apply_resid(C, lam, y) > 1e-6 * scale)
        throw std::runtime_error("inverse iteration failed to converge at index " +
                                 std::to_string(index + 1));
    return {lam, std::move(y)};
}

void finalize_modes(SpectralSet& out, std::vector<EigenPair>& pairs) {
    const int count = static_cast<int>(pairs.size());
    const size_t n = out.weight.size();
    const double h = out.grid.spacing;
    // phi = y / sqrt(w), then w-weighted modified Gram-Schmidt in index order
    out.phis.assign(static_cast<size_t>(count), {});
    for (int i = 0; i < count; ++i) {
        auto& phi = out.phis[static_cast<size_t>(i)];
        phi.resize(n);
        for (size_t j = 0; j < n; ++j)
            phi[j] = pairs[static_cast<size_t>(i)].y[j] / std::sqrt(out.weight[j]);
        for (int k = 0; k < i; ++k) {
            const auto& prev = out.phis[static_cast<size_t>(k)];
            double ip = 0.0;
            for (size_t j = 0; j < n; ++j) ip += phi[j] * prev[j] * out.weight[j];
            ip *= h;
            for (size_t j = 0; j < n; ++j) phi[j] -= ip * prev[j];
        }
        double nrm = 0.0;
        for (size_t j = 0; j < n; ++j) nrm += phi[j] * phi[j] * out.weight[j];
        nrm = std::sqrt(nrm * h);
        if (nrm == 0.0) throw std::runtime_error("eigenfunction normalization breakdown");
        size_t jmax = 0;
        for (size_t j = 0; j < n; ++j)
            if (std::abs(phi[j]) > std::abs(phi[jmax])) jmax = j;
        const double sgn = phi[jmax] < 0.0 ? -1.0 : 1.0;
        for (size_t j = 0; j < n; ++j) phi[j] *= sgn / nrm;
        out.lambdas[static_cast<size_t>(i)] = pairs[static_cast<size_t>(i)].lambda;
    }
}

SpectralSet solve_impl(const SingularOperator& op, int count, bool parallel) {
    if (count < 1) throw std::domain_error("solve_spectrum: count must be >= 1");
    if (count > op.grid.count / 8)
        throw std::domain_error("insufficient grid: count must be <= grid count / 8");
    const Tridiag C = assemble_operator(op);
    const auto [glo, ghi] = gershgorin(C);
    const double scale = std::max(std::abs(glo), std::abs(ghi));

    std::vector<EigenPair> pairs(static_cast<size_t>(count));
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i)
            pairs[static_cast<size_t>(i)] = eigenpair(C, op.grid, i, glo, ghi, scale);
    } else {
        for (int i = 0; i < count; ++i)
            pairs[static_cast<size_t>(i)] = eigenpair(C, op.grid, i, glo, ghi, scale);
    }

    SpectralSet out;
    out.grid = op.grid;
    out.weight = op.w;
    out.dim_l = op.dim_l;
    out.lambdas.resize(static_cast<size_t>(count));
    finalize_modes(out, pairs);
    return out;
}
} // namespace

SingularOperator SingularOperator::on_arc(const Grid1D& grid,
                                          const std::function<double(double)>& q, double kappa) {
    SingularOperator op;
    op.grid = grid;
    op.kappa = kappa;
    op.dim_l = 1;
    const size_t n = static_cast<size_t>(grid.count);
    op.p.assign(n, 1.0);
    op.w.assign(n, 1.0);
    op.q.resize(n);
    for (size_t i = 0; i < n; ++i) op.q[i] = q(grid.nodes[i]);
    return op;
}

Tridiag assemble_operator(const SingularOperator& op) {
    const int N = op.grid.count;
    const double h = op.grid.spacing;
    if (static_cast<int>(op.p.size()) != N || static_cast<int>(op.q.size()) != N ||
        static_cast<int>(op.w.size()) != N)
        throw std::invalid_argument("assemble_operator: sample arrays must match the grid");
    for (int i = 0; i < N; ++i) {
        if (!(op.p[static_cast<size_t>(i)] > 0.0) || !(op.w[static_cast<size_t>(i)] > 0.0))
            throw std::domain_error("assemble_operator: p and w must be positive");
    }

    Tridiag A;
    A.diag.resize(static_cast<size_t>(N));
    A.off.resize(static_cast<size_t>(N - 1));
    auto pm = [&](int i, int j) {
        return 0.5 * (op.p[static_cast<size_t>(i)] + op.p[static_cast<size_t>(j)]);
    };
    for (int i = 0; i < N; ++i) {
        const double pl = i > 0 ? pm(i - 1, i) : op.p[0];
        const double pr = i < N - 1 ? pm(i, i + 1) : op.p[static_cast<size_t>(N - 1)];
        double d = (pl + pr) / (h * h) + op.q[static_cast<size_t>(i)];
        if (op.grid.scheme == GridScheme::cell_centered) {
            // antisymmetric ghost reflection across the endpoint: the Dirichlet
            // value at the wall adds one extra p/h^2 on the boundary cells
            if (i == 0) d += pl / (h * h);
            if (i == N - 1) d += pr / (h * h);
        }
        A.diag[static_cast<size_t>(i)] = d;
        if (i < N - 1) A.off[static_cast<size_t>(i)] = -pm(i, i + 1) / (h * h);
    }
    // standard symmetric form C = D_w^{-1/2} A D_w^{-1/2}
    for (int i = 0; i < N; ++i) A.diag[static_cast<size_t>(i)] /= op.w[static_cast<size_t>(i)];
    for (int i = 0; i < N - 1; ++i)
        A.off[static_cast<size_t>(i)] /=
            std::sqrt(op.w[static_cast<size_t>(i)] * op.w[static_cast<size_t>(i + 1)]);
    return A;
}

int sturm_count_below(const Tridiag& C, double x) {
    const size_t n = C.diag.size();
    int count = 0;
    double d = C.diag[0] - x;
    if (d < 0.0) ++count;
    for (size_t i = 1; i < n; ++i) {
        if (d == 0.0) d = 1e-300;
        d = C.diag[i] - x - C.off[i - 1] * C.off[i - 1] / d;
        if (d < 0.0) ++count;
    }
    return count;
}

SpectralSet solve_spectrum(const SingularOperator& op, int count) {
    return solve_impl(op, count, true);
}

SpectralSet solve_spectrum_serial(const SingularOperator& op, int count) {
    return solve_impl(op, count, false);
}

SpectralSet solve_spectrum_richardson(const std::function<SingularOperator(int)>& make_op, int n,
                                      int count) {
    SpectralSet fine = solve_spectrum(make_op(n), count);
    const SpectralSet coarse = solve_spectrum(make_op(n / 2), count);
    fine.lambdas_extrap.resize(fine.lambdas.size());
    for (size_t i = 0; i < fine.lambdas.size(); ++i)
        fine.lambdas_extrap[i] = (4.0 * fine.lambdas[i] - coarse.lambdas[i]) / 3.0;
    return fine;
}

GrowthReport verify_growth(const SpectralSet& s) {
    if (s.lambdas.empty()) throw std::domain_error("verify_growth: empty spectral set");
    GrowthReport rep;
    rep.dim_l = s.dim_l;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    const double expo = 2.0 / s.dim_l;
    for (size_t i = 0; i < s.lambdas.size(); ++i) {
        const double ratio = s.lambdas[i] / std::pow(static_cast<double>(i + 1), expo);
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        rep.counting.emplace_back(s.lambdas[i], count_below(s, s.lambdas[i]));
    }
    return rep;
}

int count_below(const SpectralSet& s, double lam) {
    int c = 0;
    for (double l : s.lambdas)
        if (l <= lam) ++c;
    return c;
}

double liouville_potential(double mu, double theta) {
    if (!(mu > 0.0 && mu < 2.0)) throw std::domain_error("liouville_potential: mu must be in (0,2)");
    if (!(theta > 0.0 && theta < mu * kPi))
        throw std::domain_error("liouville_potential: theta must lie in (0, mu*pi)");
    const double s = mu * std::sin(theta / mu);
    return 2.0 / (s * s);
}

DefiningFnReport defining_function_check(const SingularOperator& op,
                                         std::span<const double> d_samples) {
    const int N = op.grid.count;
    if (static_cast<int>(d_samples.size()) != N)
        throw std::invalid_argument("defining_function_check: samples must match the grid");
    const double h = op.grid.spacing;
    auto sups = [](std::span<const double> d, double hh) {
        double s1 = 0.0, s2 = 0.0, sd2 = 0.0;
        for (size_t i = 1; i + 1 < d.size(); ++i) {
            const double d1 = (d[i + 1] - d[i - 1]) / (2.0 * hh);
            const double d2 = (d[i + 1] - 2.0 * d[i] + d[i - 1]) / (hh * hh);
            s1 = std::max(s1, std::abs(d1));
            s2 = std::max(s2, std::abs(d2));
            sd2 = std::max(sd2, std::abs(d[i]) * std::abs(d2));
        }
        return std::array<double, 3>{s1, s2, sd2};
    };
    DefiningFnReport rep;
    const auto fine = sups(d_samples, h);
    rep.sup_d1 = fine[0];
    rep.sup_d2 = fine[1];
    rep.sup_d_d2 = fine[2];
    std::vector<double> coarse;
    for (size_t i = 0; i < d_samples.size(); i += 2) coarse.push_back(d_samples[i]);
    const auto cs = sups(coarse, 2.0 * h);
    rep.coarse_sup_d2 = cs[1];
    rep.bounded = rep.sup_d2 <= 1.25 * rep.coarse_sup_d2 + 1e-9;
    return rep;
}

} // namespace conex
