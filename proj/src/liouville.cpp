#include "conex/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include "conex/fit.hpp"
#include "conex/grid.hpp"

namespace conex {

namespace {
constexpr double kPi = std::numbers::pi;

size_t idx(const SectorSpec& s, int i, int j) {
    return static_cast<size_t>(i) * static_cast<size_t>(s.n_theta) + static_cast<size_t>(j);
}

void fill_grid(SectorField& f, const SectorSolveOptions& opt) {
    const auto& s = f.spec;
    f.r = log_spaced(opt.r_min_frac * s.M, opt.r_top_frac * s.M, s.n_r);
    const double dth = s.mu * kPi / s.n_theta;
    f.theta.resize(static_cast<size_t>(s.n_theta));
    for (int j = 0; j < s.n_theta; ++j) f.theta[static_cast<size_t>(j)] = (j + 0.5) * dth;
}

void fill_exact(SectorField& f, bool parallel) {
    const auto& s = f.spec;
    const size_t total = static_cast<size_t>(s.n_r) * static_cast<size_t>(s.n_theta);
    f.u.resize(total);
    f.u_T.resize(total);
    f.v.resize(total);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < s.n_r; ++i) {
        for (int j = 0; j < s.n_theta; ++j) {
            const double r = f.r[static_cast<size_t>(i)], th = f.theta[static_cast<size_t>(j)];
            const double ut = cone_solution(s.mu, r, th);
            const double vv = conformal_oracle_v(s.mu, s.M, r, th);
            f.u_T[idx(s, i, j)] = ut;
            f.v[idx(s, i, j)] = vv;
            f.u[idx(s, i, j)] = ut + vv;
        }
    }
    f.arc_trace.resize(static_cast<size_t>(s.n_theta));
    for (int j = 0; j < s.n_theta; ++j)
        f.arc_trace[static_cast<size_t>(j)] = f.v[idx(s, s.n_r - 1, j)];
}

std::vector<std::vector<double>> project_impl(const SectorField& field, const SpectralSet& basis,
                                              int count, bool parallel) {
    const auto& s = field.spec;
    if (count < 1 || count > static_cast<int>(basis.lambdas.size()))
        throw std::domain_error("project_modes: bad mode count");
    if (basis.grid.count != s.n_theta)
        throw std::invalid_argument("project_modes: basis grid does not match the field");
    for (int j = 0; j < s.n_theta; ++j)
        if (std::abs(basis.grid.nodes[static_cast<size_t>(j)] - field.theta[static_cast<size_t>(j)]) >
            1e-12)
            throw std::invalid_argument("project_modes: basis grid does not match the field");
    const double h = basis.grid.spacing;
    std::vector<std::vector<double>> A(static_cast<size_t>(count),
                                       std::vector<double>(static_cast<size_t>(s.n_r), 0.0));
#pragma omp parallel for schedule(static) collapse(2) if (parallel)
    for (int m = 0; m < count; ++m) {
        for (int i = 0; i < s.n_r; ++i) {
            const auto& phi = basis.phis[static_cast<size_t>(m)];
            double acc = 0.0;
            for (int j = 0; j < s.n_theta; ++j)
                acc += field.v[idx(s, i, j)] * phi[static_cast<size_t>(j)] *
                       basis.weight[static_cast<size_t>(j)];
            A[static_cast<size_t>(m)][static_cast<size_t>(i)] = acc * h;
        }
    }
    return A;
}
} // namespace

void SectorSpec::validate() const {
    if (!(mu > 0.0 && mu < 2.0)) throw std::domain_error("sector: mu must lie in (0, 2)");
    if (!(M > 0.0)) throw std::domain_error("sector: M must be positive");
    if (n_r < 16 || n_theta < 16) throw std::domain_error("sector: grids must be >= 16");
}

double cone_solution(double mu, double r, double theta) {
    if (!(mu > 0.0 && mu < 2.0)) throw std::domain_error("cone_solution: mu must lie in (0, 2)");
    if (!(r > 0.0)) throw std::domain_error("cone_solution: r must be positive");
    if (!(theta > 0.0 && theta < mu * kPi))
        throw std::domain_error("cone_solution: theta must lie in (0, mu*pi)");
    return -std::log(mu * r * std::sin(theta / mu));
}

double conformal_oracle(double mu, double M, std::complex<double> z) {
    if (!(mu > 0.0 && mu < 2.0)) throw std::domain_error("conformal_oracle: mu must lie in (0, 2)");
    const double r = std::abs(z);
    const double th = std::arg(z);
    if (!(r > 0.0 && r < M) || !(th > 0.0 && th < mu * kPi))
        throw std::domain_error("conformal_oracle: point must be strictly interior");
    const std::complex<double> zeta = std::polar(std::pow(r / M, 1.0 / mu), th / mu);
    const std::complex<double> f = -0.5 * (zeta + 1.0 / zeta);
    if (std::abs(f.imag()) < 1e-14) throw std::runtime_error("conformal_oracle: too close to boundary");
    // f'(z) = -(1 - zeta^{-2}) zeta / (2 mu z)
    const std::complex<double> fp = -(1.0 - 1.0 / (zeta * zeta)) * zeta / (2.0 * mu * z);
    return std::log(std::abs(fp) / f.imag());
}

double conformal_oracle_v(double mu, double M, double r, double theta) {
    if (!(r > 0.0 && r < M)) throw std::domain_error("conformal_oracle_v: need 0 < r < M");
    if (!(theta > 0.0 && theta < mu * kPi))
        throw std::domain_error("conformal_oracle_v: theta must lie in (0, mu*pi)");
    const double rho2 = std::pow(r / M, 2.0 / mu);
    const double re_z2 = rho2 * std::cos(2.0 * theta / mu);
    // |1 - zeta^2|^2 = 1 - 2 Re zeta^2 + |zeta|^4
    return 0.5 * std::log1p(rho2 * rho2 - 2.0 * re_z2) - std::log1p(-rho2);
}

SectorField oracle_field(const SectorSpec& spec, const SectorSolveOptions& opt_in) {
    spec.validate();
    SectorSolveOptions opt = opt_in;
    if (opt.r_top_frac >= 1.0) opt.r_top_frac = 0.75; // the exact field blows up at r = M
    SectorField f;
    f.spec = spec;
    f.mode = BoundaryMode::full_blowup;
    fill_grid(f, opt);
    fill_exact(f, true);
    return f;
}

SectorField oracle_field_serial(const SectorSpec& spec, const SectorSolveOptions& opt_in) {
    spec.validate();
    SectorSolveOptions opt = opt_in;
    if (opt.r_top_frac >= 1.0) opt.r_top_frac = 0.75;
    SectorField f;
    f.spec = spec;
    f.mode = BoundaryMode::full_blowup;
    fill_grid(f, opt);
    fill_exact(f, false);
    return f;
}

SectorField solve_sector(const SectorSpec& spec, BoundaryMode mode,
                         std::span<const double> arc_trace, const SectorSolveOptions& opt_in) {
    spec.validate();
    SectorSolveOptions opt = opt_in;
    if (mode == BoundaryMode::full_blowup && opt.r_top_frac >= 1.0)
        opt.r_top_frac = 0.75; // the blow-up trace must be taken strictly inside r = M

    SectorField f;
    f.spec = spec;
    f.mode = mode;
    fill_grid(f, opt);
    const int Nr = spec.n_r, Nt = spec.n_theta;

    f.arc_trace.resize(static_cast<size_t>(Nt));
    if (mode == BoundaryMode::full_blowup) {
        for (int j = 0; j < Nt; ++j)
            f.arc_trace[static_cast<size_t>(j)] = conformal_oracle_v(
                spec.mu, spec.M, f.r[static_cast<size_t>(Nr - 1)], f.theta[static_cast<size_t>(j)]);
    } else {
        if (static_cast<int>(arc_trace.size()) != Nt)
            throw std::invalid_argument("solve_sector: arc trace size must match n_theta");
        std::copy(arc_trace.begin(), arc_trace.end(), f.arc_trace.begin());
        // corner decay at rate >= d^2 expected; warn and proceed otherwise
        try {
            std::vector<double> d(f.theta.begin(), f.theta.begin() + Nt / 2);
            std::vector<double> y(f.arc_trace.begin(), f.arc_trace.begin() + Nt / 2);
            const auto fit = fit_exponent(d, y, d.front() * 0.999, 0.1 * spec.mu * kPi);
            if (fit.exponent < 1.5) {
                f.trace_decay_warning = true;
                std::cerr << "solve_sector: arc trace decays like d^" << fit.exponent
                          << " at the corner, slower than d^2; proceeding\n";
            }
        } catch (const std::exception&) {
            // zero or oscillatory trace near the corner: nothing to warn about
        }
    }

    const size_t total = static_cast<size_t>(Nr) * static_cast<size_t>(Nt);
    f.v.assign(total, 0.0);
    for (int j = 0; j < Nt; ++j) f.v[idx(spec, Nr - 1, j)] = f.arc_trace[static_cast<size_t>(j)];

    // uniform grid in s = log r; the radial part of the operator is v_ss there
    const double ds = std::log(f.r[1] / f.r[0]);
    const double dth = spec.mu * kPi / Nt;
    const double cs = 1.0 / (ds * ds), ct = 1.0 / (dth * dth);
    std::vector<double> P(static_cast<size_t>(Nt));
    for (int j = 0; j < Nt; ++j)
        P[static_cast<size_t>(j)] = liouville_potential(spec.mu, f.theta[static_cast<size_t>(j)]);

    // SOR factor from the Laplacian-only Jacobi radius
    const double Ls = std::log(f.r[static_cast<size_t>(Nr - 1)] / f.r[0]);
    const double rho_j =
        (cs * std::cos(kPi * ds / Ls) + ct * std::cos(kPi * dth / (spec.mu * kPi))) / (cs + ct);
    const double omega = 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - rho_j * rho_j)));

    int sweeps = 0;
    double res = 0.0;
    for (; sweeps < opt.max_sweeps; ++sweeps) {
        res = 0.0;
        for (int i = 1; i < Nr - 1; ++i) {
            for (int j = 0; j < Nt; ++j) {
                // ghost reflection across the straight edges: v(-theta) = -v(theta)
                const double vl = j > 0 ? f.v[idx(spec, i, j - 1)] : -f.v[idx(spec, i, 0)];
                const double vr = j < Nt - 1 ? f.v[idx(spec, i, j + 1)] : -f.v[idx(spec, i, Nt - 1)];
                const double nb =
                    cs * (f.v[idx(spec, i - 1, j)] + f.v[idx(spec, i + 1, j)]) + ct * (vl + vr);
                const double diag = 2.0 * cs + 2.0 * ct;
                const double Pj = P[static_cast<size_t>(j)];
                const double vij = f.v[idx(spec, i, j)];
                double x = vij;
                for (int nw = 0; nw < 3; ++nw) {
                    const double ex = std::exp(2.0 * x);
                    const double g = diag * x - nb + Pj * x + 0.5 * Pj * (ex - 1.0 - 2.0 * x);
                    const double gp = diag + Pj * ex;
                    x -= g / gp;
                }
                res = std::max(res, std::abs(x - vij) * (diag + Pj));
                f.v[idx(spec, i, j)] = vij + omega * (x - vij);
            }
        }
        if (res < opt.tol) break;
    }
    if (res >= opt.tol)
        throw std::runtime_error("solve_sector: relaxation stalled at residual " +
                                 std::to_string(res));
    f.sweeps = sweeps + 1;
    f.residual = res;

    f.u_T.resize(total);
    f.u.resize(total);
    for (int i = 0; i < Nr; ++i)
        for (int j = 0; j < Nt; ++j) {
            const double ut =
                cone_solution(spec.mu, f.r[static_cast<size_t>(i)], f.theta[static_cast<size_t>(j)]);
            f.u_T[idx(spec, i, j)] = ut;
            f.u[idx(spec, i, j)] = ut + f.v[idx(spec, i, j)];
        }
    return f;
}

std::vector<std::vector<double>> project_modes(const SectorField& field, const SpectralSet& basis,
                                               int count) {
    return project_impl(field, basis, count, true);
}

std::vector<std::vector<double>> project_modes_serial(const SectorField& field,
                                                      const SpectralSet& basis, int count) {
    return project_impl(field, basis, count, false);
}

} // namespace conex
