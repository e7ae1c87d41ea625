#include "conex/indexset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conex/series.hpp"

namespace conex {

namespace {
// insert into a sorted vector, merging within tol; returns true if new
bool insert_merged(std::vector<double>& v, double x, double tol) {
    auto it = std::lower_bound(v.begin(), v.end(), x - tol);
    if (it != v.end() && *it < x + tol) return false;
    v.insert(it, x);
    return true;
}
} // namespace

bool ExponentSet::contains(double a) const { return find(a) >= 0; }

int ExponentSet::find(double a) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), a - exp_tol);
    if (it != elements.end() && *it < a + exp_tol)
        return static_cast<int>(it - elements.begin());
    return -1;
}

ExponentSet monoid_generate(std::span<const double> generators, double cutoff, double exp_tol) {
    if (cutoff >= 64.0) throw std::domain_error("monoid_generate: cutoff must be < 64");
    for (double g : generators)
        if (g <= exp_tol) throw std::domain_error("monoid_generate: degenerate generator");
    ExponentSet s;
    s.kind = ExponentSet::Kind::monoid_i;
    s.cutoff = cutoff;
    s.exp_tol = exp_tol;
    s.generators.assign(generators.begin(), generators.end());
    std::sort(s.generators.begin(), s.generators.end());
    s.elements = {0.0};
    // frontier expansion in ascending order; each popped element extends by
    // every generator, merged within tol
    size_t head = 0;
    while (head < s.elements.size()) {
        const double base = s.elements[head++];
        for (double g : s.generators) {
            const double x = base + g;
            // x > base, so insertions never land before the scan position
            if (x <= cutoff + exp_tol) insert_merged(s.elements, x, exp_tol);
        }
    }
    return s;
}

ExponentSet j_closure(std::span<const double> mbars, int n, int k, double cutoff, bool l_from_one,
                      double exp_tol) {
    ExponentSet s;
    s.kind = ExponentSet::Kind::closure_j;
    s.cutoff = cutoff;
    s.exp_tol = exp_tol;
    s.generators.assign(mbars.begin(), mbars.end());
    std::sort(s.generators.begin(), s.generators.end());
    for (double m : s.generators)
        if (m <= cutoff + exp_tol) insert_merged(s.elements, m, exp_tol);

    const double half = 0.5 * (n - 2);
    const int l0 = l_from_one ? 1 : 0;
    bool grew = true;
    while (grew) {
        grew = false;
        const std::vector<double> snap = s.elements;
        for (double a : snap) {
            if (k != n && a + 2.0 <= cutoff + exp_tol)
                grew |= insert_merged(s.elements, a + 2.0, exp_tol);
            for (double b : snap)
                for (double c : snap)
                    for (int l = l0;; ++l) {
                        const double x = half + a + b + l * (half + c);
                        if (x > cutoff + exp_tol) break;
                        grew |= insert_merged(s.elements, x, exp_tol);
                        if (half + c <= exp_tol) break; // degenerate step, one pass only
                    }
        }
    }
    return s;
}

Neighbors neighbors(const ExponentSet& s, double a) {
    const int i = s.find(a);
    if (i < 0) throw std::domain_error("neighbors: element not in set");
    Neighbors nb;
    if (i > 0) nb.below = s.elements[static_cast<size_t>(i - 1)];
    if (i + 1 < static_cast<int>(s.elements.size()))
        nb.above = s.elements[static_cast<size_t>(i + 1)];
    return nb;
}

std::vector<std::pair<double, int>> log_multiplicities(const ExponentSet& I,
                                                       std::span<const double> mbars, int n,
                                                       int k) {
    const double tol = I.exp_tol;
    const double half = 0.5 * (n - 2);
    auto is_mbar = [&](double x) {
        for (double m : mbars)
            if (std::abs(x - m) <= tol) return true;
        return false;
    };

    // generic-coefficient support of v, grown exponent by exponent
    PolyLogSeries v(I.cutoff, tol);
    std::vector<std::pair<double, int>> table;
    for (double i : I.elements) {
        if (i <= tol) {
            table.emplace_back(0.0, 0); // step (1)
            continue;
        }
        // forcing support at exponent i:
        //   sum_p r^{(1+p) (n-2)/2} v^{2+p}   (analytic F applied to r^{(n-2)/2} v)
        //   plus the +2 shift of v when k != n (the r^2 Laplacian block)
        PolyLogSeries forcing(i, tol);
        if (!v.empty()) {
            const double vmin = v.min_exponent();
            PolyLogSeries vpow = series_mul(v, v); // v^2
            for (int p = 0;; ++p) {
                const double base = (1 + p) * half;
                if (base + (2 + p) * vmin > i + tol) break;
                for (const auto& t : vpow.terms()) {
                    const double e = base + t.exponent;
                    if (e <= i + tol && t.coeff != 0.0) forcing.add_term(e, t.logpow, 1.0);
                }
                if (half <= tol && vmin <= tol) break; // no exponent growth, stop
                vpow = series_mul(vpow, v);
            }
            if (k != n)
                for (const auto& t : v.terms())
                    if (t.exponent + 2.0 <= i + tol) forcing.add_term(t.exponent + 2.0, t.logpow, 1.0);
        }
        int jstar = 0;
        while (forcing.coeff_at(i, jstar) != 0.0) {
            if (++jstar > PolyLogSeries::max_logpow)
                throw std::runtime_error("log_multiplicities: support explosion past the log cap");
        }
        const int nt = is_mbar(i) ? jstar : jstar - 1;
        table.emplace_back(i, nt);
        for (int j = 0; j <= nt; ++j) v.add_term(i, j, 1.0);
    }
    return table;
}

int n_floor(int l, int n) {
    if (n <= 0 || l < 0) throw std::domain_error("n_floor: need l >= 0, n >= 1");
    return l / n;
}

} // namespace conex
