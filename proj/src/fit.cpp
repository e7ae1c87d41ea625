#include "conex/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conex {

namespace {
// least squares on a small column basis; returns coefficients and SS residual
struct LsqResult {
    std::vector<double> coef;
    double ss_res = 0.0;
};

LsqResult lsq(const std::vector<std::vector<double>>& cols, std::span<const double> y) {
    const size_t m = cols.size(), n = y.size();
    std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
    std::vector<double> atb(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j)
            for (size_t s = 0; s < n; ++s) ata[i][j] += cols[i][s] * cols[j][s];
        for (size_t s = 0; s < n; ++s) atb[i] += cols[i][s] * y[s];
    }
    // Gaussian elimination with partial pivoting
    for (size_t c = 0; c < m; ++c) {
        size_t best = c;
        for (size_t rr = c + 1; rr < m; ++rr)
            if (std::abs(ata[rr][c]) > std::abs(ata[best][c])) best = rr;
        std::swap(ata[c], ata[best]);
        std::swap(atb[c], atb[best]);
        if (ata[c][c] == 0.0) throw std::runtime_error("fit: singular least-squares system");
        for (size_t rr = c + 1; rr < m; ++rr) {
            const double f = ata[rr][c] / ata[c][c];
            for (size_t cc = c; cc < m; ++cc) ata[rr][cc] -= f * ata[c][cc];
            atb[rr] -= f * atb[c];
        }
    }
    LsqResult res;
    res.coef.assign(m, 0.0);
    for (size_t rr = m; rr-- > 0;) {
        double v = atb[rr];
        for (size_t cc = rr + 1; cc < m; ++cc) v -= ata[rr][cc] * res.coef[cc];
        res.coef[rr] = v / ata[rr][rr];
    }
    for (size_t s = 0; s < n; ++s) {
        double fitv = 0.0;
        for (size_t i = 0; i < m; ++i) fitv += res.coef[i] * cols[i][s];
        res.ss_res += (y[s] - fitv) * (y[s] - fitv);
    }
    return res;
}
} // namespace

ExponentFit fit_exponent(std::span<const double> t, std::span<const double> y, double t_lo,
                         double t_hi) {
    if (t.size() != y.size()) throw std::invalid_argument("fit_exponent: size mismatch");
    std::vector<double> lt, ly;
    int pos = 0, neg = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi) continue;
        if (y[i] == 0.0) continue;
        if (y[i] > 0.0) ++pos; else ++neg;
        lt.push_back(std::log(t[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    if (pos > 0 && neg > 0) throw std::runtime_error("oscillatory, refine window");
    if (lt.size() < 8) throw std::runtime_error("fit_exponent: need >= 8 samples in window");

    const size_t n = lt.size();
    std::vector<double> ones(n, 1.0);
    const LsqResult m1 = lsq({lt, ones}, ly);

    ExponentFit out;
    out.n_samples = static_cast<int>(n);
    out.window_lo = t_lo;
    out.window_hi = t_hi;
    out.exponent = m1.coef[0];

    double ss_tot = 0.0, mean = 0.0;
    for (double v : ly) mean += v;
    mean /= static_cast<double>(n);
    for (double v : ly) ss_tot += (v - mean) * (v - mean);
    out.r2 = ss_tot > 0.0 ? 1.0 - m1.ss_res / ss_tot : 1.0;

    // extended model log|y| = a log t + b + c log|log t| captures t^a |log t|^c
    bool extended_ok = true;
    std::vector<double> llt(n);
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(lt[i]) < 0.05) { extended_ok = false; break; }
        llt[i] = std::log(std::abs(lt[i]));
    }
    if (extended_ok && m1.ss_res > 1e-18 * static_cast<double>(n)) {
        const LsqResult m2 = lsq({lt, ones, llt}, ly);
        if (m2.ss_res * 10.0 <= m1.ss_res) {
            out.log_flag = true;
            out.exponent = m2.coef[0];
        }
    }
    return out;
}

ExponentFit edge_decay(std::span<const double> d, std::span<const double> y, double alpha) {
    return fit_exponent(d, y, 0.0, 0.1 * alpha);
}

ResidualReport expansion_residual(std::span<const double> r, std::span<const double> v_rows,
                                  int n_theta, const std::vector<PolyLogSeries>& fitted_per_theta,
                                  double order_a, double r_lo, double r_hi, double eps_min) {
    const int n_r = static_cast<int>(r.size());
    if (static_cast<int>(v_rows.size()) != n_r * n_theta)
        throw std::invalid_argument("expansion_residual: field size mismatch");
    if (static_cast<int>(fitted_per_theta.size()) != n_theta)
        throw std::invalid_argument("expansion_residual: one fitted series per angle required");

    std::vector<double> max_res(static_cast<size_t>(n_r), 0.0);
    double scale = 0.0, max_r = 0.0;
    for (int i = 0; i < n_r; ++i) {
        double m = 0.0;
        for (int j = 0; j < n_theta; ++j) {
            const double vij = v_rows[static_cast<size_t>(i) * static_cast<size_t>(n_theta) +
                                      static_cast<size_t>(j)];
            const double fitv = series_eval(fitted_per_theta[static_cast<size_t>(j)], r[static_cast<size_t>(i)]);
            m = std::max(m, std::abs(vij - fitv));
            scale = std::max(scale, std::abs(vij));
        }
        max_res[static_cast<size_t>(i)] = m;
        max_r = std::max(max_r, m);
    }

    ResidualReport rep;
    rep.order = order_a;
    rep.eps_min = eps_min;
    rep.n_r = n_r;
    rep.max_residual = max_r;
    if (max_r <= 1e-12 * std::max(scale, 1e-300)) {
        rep.at_noise_floor = true;
        rep.pass = true;
        return rep;
    }
    const auto f = fit_exponent(r, max_res, r_lo, r_hi);
    rep.slope = f.exponent;
    rep.pass = f.exponent >= order_a + eps_min;
    return rep;
}

} // namespace conex
