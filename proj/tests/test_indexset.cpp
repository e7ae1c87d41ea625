#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "conex/indexset.hpp"

using namespace conex;

namespace {
// independent brute-force enumeration over multiplicity vectors
void brute_monoid_rec(const std::vector<double>& gens, size_t i, double acc, double cutoff,
                      std::vector<double>& out) {
    if (i == gens.size()) {
        out.push_back(acc);
        return;
    }
    for (double x = acc; x <= cutoff + 1e-9; x += gens[i]) {
        brute_monoid_rec(gens, i + 1, x, cutoff, out);
        if (gens[i] <= 0.0) break;
    }
}

std::vector<double> dedupe(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    return out;
}

std::vector<double> brute_monoid(const std::vector<double>& gens, double cutoff) {
    std::vector<double> all;
    brute_monoid_rec(gens, 0, 0.0, cutoff, all);
    return dedupe(std::move(all), 1e-9);
}

// saturation with a std::set and a different iteration structure
std::vector<double> brute_closure(const std::vector<double>& mbars, int n, int k, double cutoff) {
    const double half = 0.5 * (n - 2);
    std::set<double> J;
    auto has = [&](double x) {
        auto it = J.lower_bound(x - 1e-9);
        return it != J.end() && *it < x + 1e-9;
    };
    for (double m : mbars)
        if (m <= cutoff + 1e-9) J.insert(m);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<double> cur(J.begin(), J.end());
        for (double a : cur) {
            if (k != n && a + 2.0 <= cutoff + 1e-9 && !has(a + 2.0)) {
                J.insert(a + 2.0);
                changed = true;
            }
            for (double b : cur)
                for (double c : cur)
                    for (int l = 0; half + a + b + l * (half + c) <= cutoff + 1e-9; ++l) {
                        const double x = half + a + b + l * (half + c);
                        if (!has(x)) {
                            J.insert(x);
                            changed = true;
                        }
                        if (half + c <= 1e-9) break;
                    }
        }
    }
    return {J.begin(), J.end()};
}

bool same_sets(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-8) return false;
    return true;
}
} // namespace

TEST_CASE("monoid examples") {
    auto s = monoid_generate(std::vector<double>{2.0, 0.5}, 3.0);
    CHECK(same_sets(s.elements, {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}));
    s = monoid_generate(std::vector<double>{2.0}, 7.0);
    CHECK(same_sets(s.elements, {0.0, 2.0, 4.0, 6.0}));
    s = monoid_generate(std::vector<double>{2.0, 4.0, 6.0, 8.0}, 9.0);
    CHECK(same_sets(s.elements, {0.0, 2.0, 4.0, 6.0, 8.0}));
}

TEST_CASE("monoid rejects degenerate input") {
    CHECK_THROWS_AS(monoid_generate(std::vector<double>{0.0}, 5.0), std::domain_error);
    CHECK_THROWS_AS(monoid_generate(std::vector<double>{2.0}, 64.0), std::domain_error);
}

TEST_CASE("monoid closure under addition") {
    const auto s = monoid_generate(std::vector<double>{1.5, 2.0, 3.7}, 12.0);
    for (double a : s.elements)
        for (double b : s.elements)
            if (a + b <= s.cutoff + 1e-9) CHECK(s.contains(a + b));
}

TEST_CASE("monoid matches brute force on random generator sets") {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> gen(0.3, 5.0), cut(4.0, 16.0);
    std::uniform_int_distribution<int> ng(1, 4);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> gens;
        const int m = ng(rng);
        for (int i = 0; i < m; ++i) gens.push_back(gen(rng));
        const double cutoff = cut(rng);
        const auto s = monoid_generate(gens, cutoff);
        CHECK(same_sets(s.elements, brute_monoid(gens, cutoff)));
    }
}

TEST_CASE("j closure examples") {
    auto s = j_closure(std::vector<double>{3.0}, 4, 4, 12.0);
    CHECK(same_sets(s.elements, {3.0, 7.0, 11.0}));
    s = j_closure(std::vector<double>{3.0}, 4, 3, 12.0);
    CHECK(same_sets(s.elements, {3.0, 5.0, 7.0, 9.0, 11.0}));
    s = j_closure(std::vector<double>{}, 5, 3, 12.0);
    CHECK(s.elements.empty());
}

TEST_CASE("j closure matches brute force and is a subset of the monoid") {
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> mb(1.0, 6.0), cut(6.0, 16.0);
    std::uniform_int_distribution<int> nn(3, 6), nm(1, 3);
    for (int t = 0; t < 20; ++t) {
        const int n = nn(rng);
        std::uniform_int_distribution<int> kk(2, n);
        const int k = kk(rng);
        std::vector<double> mbars;
        const int m = nm(rng);
        for (int i = 0; i < m; ++i) mbars.push_back(mb(rng));
        const double cutoff = cut(rng);
        const auto J = j_closure(mbars, n, k, cutoff);
        CHECK(same_sets(J.elements, brute_closure(mbars, n, k, cutoff)));

        // J sits inside the monoid over {2, (n-2)/2} and the mbars
        std::vector<double> gens = {2.0, 0.5 * (n - 2)};
        gens.insert(gens.end(), mbars.begin(), mbars.end());
        const auto I = monoid_generate(gens, cutoff);
        for (double a : J.elements) CHECK(I.contains(a));
    }
}

TEST_CASE("neighbors") {
    ExponentSet s;
    s.elements = {0.0, 2.0, 4.0, 6.0};
    s.exp_tol = 1e-9;
    auto nb = neighbors(s, 2.0);
    CHECK(nb.below.value() == doctest::Approx(0.0));
    CHECK(nb.above.value() == doctest::Approx(4.0));
    nb = neighbors(s, 0.0);
    CHECK_FALSE(nb.below.has_value());
    CHECK(nb.above.value() == doctest::Approx(2.0));
    nb = neighbors(s, 6.0);
    CHECK_FALSE(nb.above.has_value());
    CHECK_THROWS_AS(neighbors(s, 3.0), std::domain_error);

    const auto m = monoid_generate(std::vector<double>{0.5}, 4.0);
    nb = neighbors(m, 0.5);
    CHECK(nb.below.value() == doctest::Approx(0.0));
    CHECK(nb.above.value() == doctest::Approx(1.0));

    // order consistency: nothing strictly between a and its neighbors
    for (double a : m.elements) {
        const auto nbb = neighbors(m, a);
        if (nbb.below) CHECK(nbb.below.value() < a);
        if (nbb.above) CHECK(nbb.above.value() > a);
    }
}

TEST_CASE("log multiplicities: leading resonance carries no log") {
    // I over {2, (n-2)/2, mbar} with mbar smallest-forcing-free
    const int n = 5, k = 5;
    const double mbar = 1.9;
    const auto I = monoid_generate(std::vector<double>{2.0, 1.5, mbar}, 10.0);
    const auto table = log_multiplicities(I, std::vector<double>{mbar}, n, k);
    for (const auto& [e, v] : table) {
        if (std::abs(e - mbar) < 1e-9) CHECK(v == 0);
        if (e > 1e-9 && e < mbar - 1e-9) CHECK(v == -1); // nothing below the first mode
    }
}

TEST_CASE("log multiplicities: synthetic resonance promotes one log") {
    // mbar2 = (n-2)/2 + 2 mbar1 exactly: the quadratic self-interaction lands
    // on the resonant slot
    const int n = 4, k = 4;
    const double m1 = 1.3, m2 = 0.5 * (n - 2) + 2 * m1;
    const auto I = monoid_generate(std::vector<double>{2.0, 1.0, m1, m2}, 8.0);
    const auto table = log_multiplicities(I, std::vector<double>{m1, m2}, n, k);
    bool saw = false;
    for (const auto& [e, v] : table)
        if (std::abs(e - m2) < 1e-9) {
            CHECK(v == 1);
            saw = true;
        }
    CHECK(saw);
}

TEST_CASE("log multiplicities: shift rule feeds exponents when k != n") {
    const int n = 6, k = 3;
    const double m1 = 1.7;
    const auto I = monoid_generate(std::vector<double>{2.0, 2.0, m1}, 6.0);
    const auto table = log_multiplicities(I, std::vector<double>{m1}, n, k);
    // m1 + 2 is in I (generators include 2) and the shifted v support hits it
    for (const auto& [e, v] : table)
        if (std::abs(e - (m1 + 2.0)) < 1e-9) CHECK(v == 0);
}

TEST_CASE("log multiplicities monotone under support growth") {
    const int n = 4, k = 3;
    const std::vector<double> mb1 = {1.3}, mb2 = {1.3, 2.1};
    const auto I1 = monoid_generate(std::vector<double>{2.0, 1.0, 1.3}, 9.0);
    const auto I2 = monoid_generate(std::vector<double>{2.0, 1.0, 1.3, 2.1}, 9.0);
    const auto t1 = log_multiplicities(I1, mb1, n, k);
    const auto t2 = log_multiplicities(I2, mb2, n, k);
    for (const auto& [e, v] : t1) {
        for (const auto& [e2, v2] : t2)
            if (std::abs(e - e2) < 1e-9) CHECK(v2 >= v);
    }
}

TEST_CASE("n_floor") {
    CHECK(n_floor(7, 3) == 2);
    CHECK(n_floor(0, 3) == 0);
    CHECK(n_floor(6, 3) == 2);
    CHECK(n_floor(5, 6) == 0);
    for (int l = 0; l < 30; ++l)
        for (int n = 1; n < 8; ++n)
            CHECK(n_floor(l, n) == static_cast<int>(std::floor(static_cast<double>(l) / n)));
}

TEST_CASE("zero element present with N0 = 0") {
    const auto I = monoid_generate(std::vector<double>{2.0, 1.5}, 6.0);
    const auto table = log_multiplicities(I, std::vector<double>{1.5}, 5, 5);
    CHECK(table.front().first == 0.0);
    CHECK(table.front().second == 0);
}
