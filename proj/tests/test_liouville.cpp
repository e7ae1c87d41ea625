#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "conex/liouville.hpp"
#include "conex/spectral.hpp"

using namespace conex;
constexpr double kPi = std::numbers::pi;

TEST_CASE("cone solution values") {
    CHECK(cone_solution(0.5, 1.0, kPi / 4) == doctest::Approx(std::log(2.0)));
    // polar form agrees with (1/2) log(1/x^2 + 1/y^2) at (x, y) = (1, 1)
    CHECK(cone_solution(0.5, std::sqrt(2.0), kPi / 4) == doctest::Approx(0.5 * std::log(2.0)));
    CHECK(cone_solution(1.0, 1.0, kPi / 2) == doctest::Approx(0.0));
    CHECK_THROWS_AS(cone_solution(0.5, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(cone_solution(0.5, 0.0, kPi / 4), std::domain_error);
}

TEST_CASE("conformal oracle hand value") {
    const double u = conformal_oracle(0.5, 1.0, {0.5, 0.5});
    // zeta = i/2, f = 3i/4, |f'| = 2.5 sqrt(2), u = log(2.5 sqrt 2 / 0.75)
    CHECK(u == doctest::Approx(std::log(2.5 * std::sqrt(2.0) / 0.75)).epsilon(1e-10));
    CHECK(u == doctest::Approx(1.55047).epsilon(1e-4));
}

TEST_CASE("oracle symmetry across the bisector") {
    for (double r : {0.2, 0.5, 0.8}) {
        for (double th : {0.1, 0.4, 0.7}) {
            const double a = conformal_oracle_v(0.5, 1.0, r, th);
            const double b = conformal_oracle_v(0.5, 1.0, r, kPi / 2 - th);
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
        }
    }
}

TEST_CASE("direct map equals the cancellation-free split") {
    for (double r : {0.1, 0.45, 0.9}) {
        for (double th : {0.2, 0.7, 1.3}) {
            const double u = conformal_oracle(0.5, 1.0, std::polar(r, th));
            const double split = cone_solution(0.5, r, th) + conformal_oracle_v(0.5, 1.0, r, th);
            CHECK(u == doctest::Approx(split).epsilon(1e-12));
        }
    }
}

TEST_CASE("conformal invariance between mu = 1/2 and mu = 1") {
    // u_{1/2}(z) = u_1(z^2) + log|2z| exactly
    for (double r : {0.3, 0.6, 0.9}) {
        for (double th : {0.3, 0.8, 1.2}) {
            const std::complex<double> z = std::polar(r, th);
            const double lhs = conformal_oracle(0.5, 1.0, z);
            const double rhs = conformal_oracle(1.0, 1.0, z * z) + std::log(2.0 * r);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("oracle rejects boundary points") {
    CHECK_THROWS_AS(conformal_oracle(0.5, 1.0, {2.0, 0.5}), std::domain_error);
    CHECK_THROWS_AS(conformal_oracle(0.5, 1.0, {0.5, -0.1}), std::domain_error);
    CHECK_THROWS_AS(conformal_oracle_v(0.5, 1.0, 1.0, 0.3), std::domain_error);
}

TEST_CASE("oracle PDE residual vanishes at second order") {
    // five-point Laplacian of u minus e^{2u} at a fixed interior point
    const double x0 = 0.35, y0 = 0.3;
    double prev = -1.0;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
        const auto u = [&](double x, double y) {
            return conformal_oracle(0.5, 1.0, {x, y});
        };
        const double lap = (u(x0 + h, y0) + u(x0 - h, y0) + u(x0, y0 + h) + u(x0, y0 - h) -
                            4.0 * u(x0, y0)) /
                           (h * h);
        const double res = std::abs(lap - std::exp(2.0 * u(x0, y0)));
        if (prev > 0.0) CHECK(res <= prev / 3.0);
        prev = res;
    }
}

TEST_CASE("oracle field kernels: parallel equals serial") {
    SectorSpec spec{0.5, 1.0, 48, 32};
    const auto a = oracle_field(spec);
    const auto b = oracle_field_serial(spec);
    REQUIRE(a.v.size() == b.v.size());
    for (size_t i = 0; i < a.v.size(); ++i) CHECK(a.v[i] == b.v[i]);
}

TEST_CASE("zero arc trace keeps the cone solution") {
    SectorSpec spec{0.5, 1.0, 32, 16};
    std::vector<double> zero(16, 0.0);
    const auto f = solve_sector(spec, BoundaryMode::prescribed_arc_trace, zero);
    for (double v : f.v) CHECK(v == 0.0);
    for (size_t i = 0; i < f.u.size(); ++i) CHECK(f.u[i] == doctest::Approx(f.u_T[i]));
    CHECK(f.sweeps == 1);
}

TEST_CASE("discrete maximum principle for small nonnegative traces") {
    SectorSpec spec{0.5, 1.0, 48, 24};
    std::vector<double> tr(24);
    const double dth = 0.5 * kPi / 24;
    for (int j = 0; j < 24; ++j) tr[static_cast<size_t>(j)] = 1e-3 * std::pow(std::sin(2 * (j + 0.5) * dth), 2);
    const auto f = solve_sector(spec, BoundaryMode::prescribed_arc_trace, tr);
    for (double v : f.v) CHECK(v >= -1e-12);
}

TEST_CASE("perturbative trace follows the homogeneous radial mode") {
    // linearization: v ~ eps (r/M)^4 sin^2(2 theta) for the quadrant
    SectorSpec spec{0.5, 1.0, 192, 96};
    const double eps = 1e-3;
    std::vector<double> tr(96);
    const double dth = 0.5 * kPi / 96;
    for (int j = 0; j < 96; ++j) tr[static_cast<size_t>(j)] = eps * std::pow(std::sin(2 * (j + 0.5) * dth), 2);
    SectorSolveOptions opt;
    opt.tol = 1e-12;
    const auto f = solve_sector(spec, BoundaryMode::prescribed_arc_trace, tr, opt);
    double worst = 0.0;
    for (int i = 1; i < spec.n_r - 1; ++i) {
        const double r = f.r[static_cast<size_t>(i)];
        if (r < 0.2 || r > 0.95) continue;
        double ring_max = 0.0, ref_max = 0.0;
        for (int j = 0; j < spec.n_theta; ++j) {
            const double ref = std::pow(r, 4.0) * std::pow(std::sin(2 * f.theta[static_cast<size_t>(j)]), 2);
            ring_max = std::max(ring_max, std::abs(f.value(f.v, i, j) / eps - ref));
            ref_max = std::max(ref_max, ref);
        }
        worst = std::max(worst, ring_max / ref_max);
    }
    CHECK(worst <= 0.01 + 10 * eps);
}

TEST_CASE("full blow-up solve converges to the oracle") {
    SectorSpec spec{0.5, 1.0, 64, 32};
    const auto f = solve_sector(spec, BoundaryMode::full_blowup);
    double err = 0.0;
    for (int i = 1; i < spec.n_r - 1; ++i)
        for (int j = 0; j < spec.n_theta; ++j)
            err = std::max(err, std::abs(f.value(f.v, i, j) -
                                         conformal_oracle_v(0.5, 1.0, f.r[static_cast<size_t>(i)],
                                                            f.theta[static_cast<size_t>(j)])));
    CHECK(err <= 5e-3);
    CHECK(f.residual <= 1e-9);
}

TEST_CASE("comparison with the cone solution tightens on larger sectors") {
    // sup over the fixed region r <= 1/2 of |u - u_T| decreases in M
    double prev = 1e30;
    for (double M : {1.0, 2.0, 4.0}) {
        SectorSpec spec{0.5, M, 96, 32};
        SectorSolveOptions opt;
        opt.r_min_frac = 1e-2 / M;
        const auto f = solve_sector(spec, BoundaryMode::full_blowup, {}, opt);
        double sup = 0.0;
        for (int i = 0; i < spec.n_r; ++i) {
            if (f.r[static_cast<size_t>(i)] > 0.5) continue;
            for (int j = 0; j < spec.n_theta; ++j)
                sup = std::max(sup, std::abs(f.value(f.v, i, j)));
        }
        CHECK(sup < prev);
        prev = sup;
    }
}

TEST_CASE("projection picks out a synthetic mode") {
    const int nth = 256;
    const auto g = Grid1D::cell_centered(0.5 * kPi, nth);
    const auto op = SingularOperator::on_arc(
        g, [](double th) { return liouville_potential(0.5, th); }, 2.0);
    const auto basis = solve_spectrum(op, 3);

    SectorSpec spec{0.5, 1.0, 40, nth};
    SectorField f;
    f.spec = spec;
    f.r = log_spaced(1e-2, 1.0, spec.n_r);
    f.theta = g.nodes;
    f.v.resize(static_cast<size_t>(spec.n_r) * nth);
    auto gr = [](double r) { return 2.0 * r * r; };
    for (int i = 0; i < spec.n_r; ++i)
        for (int j = 0; j < nth; ++j)
            f.v[static_cast<size_t>(i) * nth + static_cast<size_t>(j)] =
                gr(f.r[static_cast<size_t>(i)]) * basis.phis[0][static_cast<size_t>(j)];

    const auto A = project_modes(f, basis, 3);
    for (int i = 0; i < spec.n_r; ++i) {
        CHECK(A[0][static_cast<size_t>(i)] ==
              doctest::Approx(gr(f.r[static_cast<size_t>(i)])).epsilon(1e-10));
        CHECK(std::abs(A[1][static_cast<size_t>(i)]) <= 1e-8);
        CHECK(std::abs(A[2][static_cast<size_t>(i)]) <= 1e-8);
    }

    const auto As = project_modes_serial(f, basis, 3);
    for (int m = 0; m < 3; ++m)
        for (int i = 0; i < spec.n_r; ++i)
            CHECK(A[static_cast<size_t>(m)][static_cast<size_t>(i)] ==
                  As[static_cast<size_t>(m)][static_cast<size_t>(i)]);

    // zero field projects to zero
    std::fill(f.v.begin(), f.v.end(), 0.0);
    const auto Z = project_modes(f, basis, 2);
    for (const auto& row : Z)
        for (double x : row) CHECK(x == 0.0);
}

TEST_CASE("projection rejects mismatched grids") {
    const auto g = Grid1D::cell_centered(0.5 * kPi, 64);
    const auto op = SingularOperator::on_arc(
        g, [](double th) { return liouville_potential(0.5, th); }, 2.0);
    const auto basis = solve_spectrum(op, 2);
    SectorSpec spec{0.5, 1.0, 32, 48};
    const auto f = oracle_field(spec);
    CHECK_THROWS_AS(project_modes(f, basis, 2), std::invalid_argument);
}

TEST_CASE("oracle field edge decay matches the expansion coefficients") {
    // v / r^4 near the edge decays like sin^2(2 theta) ~ theta^2
    SectorSpec spec{0.5, 1.0, 64, 512};
    SectorSolveOptions opt;
    opt.r_min_frac = 1e-4;
    opt.r_top_frac = 0.5;
    const auto f = oracle_field(spec, opt);
    const int ring = 10;
    const double r = f.r[ring];
    std::vector<double> d, y;
    for (int j = 0; j < spec.n_theta / 2; ++j) {
        d.push_back(f.theta[static_cast<size_t>(j)]);
        y.push_back(f.value(f.v, ring, j) / std::pow(r, 4.0));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < d.size(); ++i) {
        if (d[i] >= 0.1 * 0.5 * kPi) continue;
        const double lx = std::log(d[i]), ly = std::log(std::abs(y[i]));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope - 2.0) <= 0.1);
}
