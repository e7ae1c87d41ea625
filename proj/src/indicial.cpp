#include "conex/indicial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conex/grid.hpp"

namespace conex {

namespace {

// cumulative trapezoid of g on a uniform grid t, from t[0] to t[j], with the
// Euler-Maclaurin endpoint-derivative correction (dt^2/12)(g'(a) - g'(b))
std::vector<double> gradient_uniform(std::span<const double> g, double dt) {
    const size_t n = g.size();
    std::vector<double> gp(n);
    if (n < 3) {
        for (size_t i = 0; i < n; ++i) gp[i] = 0.0;
        return gp;
    }
    gp[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * dt);
    for (size_t i = 1; i + 1 < n; ++i) gp[i] = (g[i + 1] - g[i - 1]) / (2.0 * dt);
    gp[n - 1] = (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) / (2.0 * dt);
    return gp;
}

std::vector<double> prefix_integral(std::span<const double> g, double dt) {
    const size_t n = g.size();
    std::vector<double> out(n, 0.0);
    double acc = 0.0;
    for (size_t i = 1; i < n; ++i) {
        acc += 0.5 * dt * (g[i] + g[i - 1]);
        out[i] = acc;
    }
    const auto gp = gradient_uniform(g, dt);
    const double c = dt * dt / 12.0;
    for (size_t i = 0; i < n; ++i) out[i] += c * (gp[0] - gp[i]);
    out[0] = 0.0;
    return out;
}

std::vector<double> suffix_integral(std::span<const double> g, double dt) {
    const size_t n = g.size();
    std::vector<double> out(n, 0.0);
    double acc = 0.0;
    for (size_t i = n - 1; i-- > 0;) {
        acc += 0.5 * dt * (g[i] + g[i + 1]);
        out[i] = acc;
    }
    const auto gp = gradient_uniform(g, dt);
    const double c = dt * dt / 12.0;
    for (size_t i = 0; i < n; ++i) out[i] += c * (gp[i] - gp[n - 1]);
    out[n - 1] = 0.0;
    return out;
}
} // namespace

IndicialPair indicial_roots(int k, double lambda) {
    if (k < 2) throw std::domain_error("indicial_roots: k must be >= 2");
    if (!(lambda > 0.0)) throw std::domain_error("indicial_roots: lambda must be positive");
    const double b = static_cast<double>(k - 2);
    const double disc = std::sqrt(b * b + 4.0 * lambda);
    return {0.5 * (-b + disc), 0.5 * (-b - disc), k, lambda};
}

PolyLogSeries particular_poly_log(int k, double lambda, const PolyLogSeries& forcing) {
    const IndicialPair mr = indicial_roots(k, lambda);
    const double gap = mr.m_plus - mr.m_minus;
    const double tol = forcing.exp_tol();
    PolyLogSeries out(forcing.order(), tol);

    // group forcing terms by exponent, highest log power first
    std::vector<double> exps;
    for (const auto& t : forcing.terms()) {
        if (t.exponent < -tol) throw std::domain_error("particular_poly_log: negative exponent");
        if (exps.empty() || std::abs(exps.back() - t.exponent) > tol) exps.push_back(t.exponent);
    }
    for (double a : exps) {
        const int jmax = forcing.max_logpow_at(a);
        const bool resonant = std::abs(a - mr.m_plus) <= tol;
        if (resonant) {
            // L[r^a (log)^p] = p (m+ - m-) (log)^{p-1} + p(p-1) (log)^{p-2}, times r^a
            if (jmax + 1 > PolyLogSeries::max_logpow)
                throw std::runtime_error("particular_poly_log: log-degree overflow");
            std::vector<double> b(static_cast<size_t>(jmax + 3), 0.0); // b[p], p = 0..jmax+1
            for (int q = jmax; q >= 0; --q) {
                const double c = forcing.coeff_at(a, q);
                const double hi = (q + 2.0) * (q + 1.0) * b[static_cast<size_t>(q + 2)];
                b[static_cast<size_t>(q + 1)] = (c - hi) / ((q + 1.0) * gap);
            }
            for (int p = 1; p <= jmax + 1; ++p)
                if (b[static_cast<size_t>(p)] != 0.0) out.add_term(a, p, b[static_cast<size_t>(p)]);
        } else {
            const double Q = a * a + (k - 2.0) * a - lambda;
            std::vector<double> b(static_cast<size_t>(jmax + 3), 0.0);
            for (int p = jmax; p >= 0; --p) {
                const double c = forcing.coeff_at(a, p);
                const double hi1 = (p + 1.0) * (2.0 * a + k - 2.0) * b[static_cast<size_t>(p + 1)];
                const double hi2 = (p + 2.0) * (p + 1.0) * b[static_cast<size_t>(p + 2)];
                b[static_cast<size_t>(p)] = (c - hi1 - hi2) / Q;
            }
            for (int p = 0; p <= jmax; ++p)
                if (b[static_cast<size_t>(p)] != 0.0) out.add_term(a, p, b[static_cast<size_t>(p)]);
        }
    }
    return out;
}

RadialMode make_radial_mode(int k, double lambda, double r0, double A_at_r0, int count,
                            double r_min_frac) {
    if (!(r0 > 0.0)) throw std::domain_error("make_radial_mode: r0 must be positive");
    if (!(r_min_frac > 0.0 && r_min_frac < 1.0))
        throw std::domain_error("make_radial_mode: r_min_frac must lie in (0,1)");
    RadialMode m;
    m.k = k;
    m.lambda = lambda;
    m.r0 = r0;
    m.A_at_r0 = A_at_r0;
    m.r = log_spaced(r_min_frac * r0, r0, count);
    m.forcing.assign(m.r.size(), 0.0);
    return m;
}

std::vector<double> solve_radial_ode(const RadialMode& mode) {
    const size_t n = mode.r.size();
    if (n < 8) throw std::domain_error("solve_radial_ode: need at least 8 radius samples");
    if (mode.forcing.size() != n)
        throw std::invalid_argument("solve_radial_ode: forcing size mismatch");
    if (std::abs(mode.r.back() - mode.r0) > 1e-12 * mode.r0)
        throw std::invalid_argument("solve_radial_ode: grid must end at r0");
    const IndicialPair mr = indicial_roots(mode.k, mode.lambda);
    const double gap = mr.m_plus - mr.m_minus;

    std::vector<double> t(n);
    for (size_t i = 0; i < n; ++i) t[i] = std::log(mode.r[i]);
    const double dt = (t.back() - t.front()) / (n - 1);

    // integrability pre-check: int_0^r s^{-1-m_minus} F ds needs the local
    // power law F ~ c s^a with a > m_minus near s = 0
    double head = 0.0;
    const double F0 = mode.forcing[0], F1 = mode.forcing[1];
    if (F0 != 0.0) {
        if (F0 * F1 <= 0.0) throw std::runtime_error("forcing too singular at 0");
        const double a = (std::log(std::abs(F1)) - std::log(std::abs(F0))) / dt;
        if (a <= mr.m_minus + 1e-6) throw std::runtime_error("forcing too singular at 0");
        const double c = F0 / std::pow(mode.r[0], a);
        head = c * std::pow(mode.r[0], a - mr.m_minus) / (a - mr.m_minus);
    }

    std::vector<double> g1(n), g2(n);
    for (size_t i = 0; i < n; ++i) {
        g1[i] = std::exp(-mr.m_minus * t[i]) * mode.forcing[i];
        g2[i] = std::exp(-mr.m_plus * t[i]) * mode.forcing[i];
    }
    std::vector<double> I1 = prefix_integral(g1, dt);
    for (double& v : I1) v += head;
    const std::vector<double> I2 = suffix_integral(g2, dt);

    const double C1 = -I1.back() / gap;
    const double C2 = mode.A_at_r0 * std::pow(mode.r0, -mr.m_plus) -
                      C1 * std::pow(mode.r0, mr.m_minus - mr.m_plus);

    std::vector<double> A(n);
    for (size_t i = 0; i < n; ++i) {
        const double rp = std::pow(mode.r[i], mr.m_plus);
        const double rm = std::pow(mode.r[i], mr.m_minus);
        A[i] = C2 * rp - rm / gap * I1[i] - rp / gap * I2[i];
    }
    A.back() = mode.A_at_r0;
    return A;
}

std::vector<double> euler_apply(int k, double lambda, std::span<const double> r,
                                std::span<const double> A) {
    const size_t n = r.size();
    if (A.size() != n || n < 3) throw std::invalid_argument("euler_apply: size mismatch");
    const double dt = std::log(r[1] / r[0]);
    std::vector<double> out(n - 2);
    // in t = log r:  r^2 A'' + (k-1) r A' = A_tt + (k-2) A_t
    for (size_t i = 1; i + 1 < n; ++i) {
        const double att = (A[i + 1] - 2.0 * A[i] + A[i - 1]) / (dt * dt);
        const double at = (A[i + 1] - A[i - 1]) / (2.0 * dt);
        out[i - 1] = att + (k - 2.0) * at - lambda * A[i];
    }
    return out;
}

} // namespace conex
