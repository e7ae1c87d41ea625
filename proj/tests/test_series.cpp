#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "conex/series.hpp"

using namespace conex;

namespace {
PolyLogSeries random_series(std::mt19937& rng, double order) {
    std::uniform_int_distribution<int> nterms(0, 5), logp(0, 2);
    std::uniform_real_distribution<double> expo(0.0, order), coef(-2.0, 2.0);
    PolyLogSeries s(order);
    const int n = nterms(rng);
    for (int i = 0; i < n; ++i) s.add_term(expo(rng), logp(rng), coef(rng));
    return s;
}

bool close_series(const PolyLogSeries& a, const PolyLogSeries& b, double tol = 1e-12) {
    for (const auto& t : a.terms())
        if (std::abs(b.coeff_at(t.exponent, t.logpow) - t.coeff) > tol) return false;
    for (const auto& t : b.terms())
        if (std::abs(a.coeff_at(t.exponent, t.logpow) - t.coeff) > tol) return false;
    return true;
}
} // namespace

TEST_CASE("monomial convolution") {
    auto a = PolyLogSeries::monomial(2.0, 0, 1.0, 10.0);
    PolyLogSeries b(10.0);
    b.add_term(2.0, 0, 1.0);
    b.add_term(3.0, 1, 1.0);
    const auto p = series_mul(a, b);
    CHECK(p.coeff_at(4.0, 0) == doctest::Approx(1.0));
    CHECK(p.coeff_at(5.0, 1) == doctest::Approx(1.0));
    CHECK(p.size() == 2);
}

TEST_CASE("telescoping product") {
    PolyLogSeries a(10.0), b(10.0);
    a.add_term(0.0, 0, 1.0);
    a.add_term(1.0, 0, 1.0);
    b.add_term(0.0, 0, 1.0);
    b.add_term(1.0, 0, -1.0);
    const auto p = series_mul(a, b);
    CHECK(p.coeff_at(0.0, 0) == doctest::Approx(1.0));
    CHECK(p.coeff_at(1.0, 0) == 0.0);
    CHECK(p.coeff_at(2.0, 0) == doctest::Approx(-1.0));
    CHECK(p.size() == 2); // the d term cancelled exactly and was dropped
}

TEST_CASE("square with log term") {
    // (d^2 + d^2 log d)^2 = d^4 + 2 d^4 log d + d^4 log^2 d
    PolyLogSeries a(10.0);
    a.add_term(2.0, 0, 1.0);
    a.add_term(2.0, 1, 1.0);
    const auto p = series_mul(a, a);
    CHECK(p.coeff_at(4.0, 0) == doctest::Approx(1.0));
    CHECK(p.coeff_at(4.0, 1) == doctest::Approx(2.0));
    CHECK(p.coeff_at(4.0, 2) == doctest::Approx(1.0));
}

TEST_CASE("mul truncation order") {
    // order of a*b is min(a.order + b.min_exp, b.order + a.min_exp)
    auto a = PolyLogSeries::monomial(1.0, 0, 1.0, 3.0);
    auto b = PolyLogSeries::monomial(2.0, 0, 1.0, 8.0);
    const auto p = series_mul(a, b);
    CHECK(p.order() == doctest::Approx(5.0));
}

TEST_CASE("exponent merging within tol") {
    PolyLogSeries s(10.0, 1e-9);
    s.add_term(1.0, 0, 1.0);
    s.add_term(1.0 + 1e-10, 0, 2.0);
    CHECK(s.size() == 1);
    CHECK(s.coeff_at(1.0, 0) == doctest::Approx(3.0));
}

TEST_CASE("log-degree overflow rejected") {
    PolyLogSeries s(10.0);
    CHECK_THROWS_WITH_AS(s.add_term(1.0, 33, 1.0), doctest::Contains("log-degree overflow"),
                         std::runtime_error);
    PolyLogSeries a(40.0), b(40.0);
    a.add_term(1.0, 20, 1.0);
    b.add_term(1.0, 20, 1.0);
    CHECK_THROWS_AS(series_mul(a, b), std::runtime_error);
}

TEST_CASE("non-finite coefficient rejected") {
    PolyLogSeries s(10.0);
    CHECK_THROWS_AS(s.add_term(1.0, 0, std::nan("")), std::domain_error);
    CHECK_THROWS_AS(s.add_term(1.0, 0, INFINITY), std::domain_error);
}

TEST_CASE("compose: squaring germ") {
    // G(x) = x^2 with w = d + d^2 -> d^2 + 2 d^3 + d^4
    const double germ[] = {0.0, 0.0, 1.0};
    PolyLogSeries w(6.0);
    w.add_term(1.0, 0, 1.0);
    w.add_term(2.0, 0, 1.0);
    const auto g = series_compose(germ, w);
    CHECK(g.coeff_at(2.0, 0) == doctest::Approx(1.0));
    CHECK(g.coeff_at(3.0, 0) == doctest::Approx(2.0));
    CHECK(g.coeff_at(4.0, 0) == doctest::Approx(1.0));
}

TEST_CASE("compose: exp(x)-1-x germ") {
    // coefficients 0, 0, 1/2!, 1/3!, 1/4! with w = d
    const double germ[] = {0.0, 0.0, 1.0 / 2, 1.0 / 6, 1.0 / 24};
    const auto w = PolyLogSeries::monomial(1.0, 0, 1.0, 4.0);
    const auto g = series_compose(germ, w);
    CHECK(g.coeff_at(2.0, 0) == doctest::Approx(0.5));
    CHECK(g.coeff_at(3.0, 0) == doctest::Approx(1.0 / 6));
    CHECK(g.coeff_at(4.0, 0) == doctest::Approx(1.0 / 24));
}

TEST_CASE("compose: geometric series germ") {
    // G(x) = 1/(1+x) ~ 1 - x + x^2 - x^3 with w = d
    const double germ[] = {1.0, -1.0, 1.0, -1.0};
    const auto w = PolyLogSeries::monomial(1.0, 0, 1.0, 3.0);
    const auto g = series_compose(germ, w);
    CHECK(g.coeff_at(0.0, 0) == doctest::Approx(1.0));
    CHECK(g.coeff_at(1.0, 0) == doctest::Approx(-1.0));
    CHECK(g.coeff_at(2.0, 0) == doctest::Approx(1.0));
    CHECK(g.coeff_at(3.0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("compose rejects zero-exponent base") {
    const double germ[] = {0.0, 1.0};
    PolyLogSeries w(4.0);
    w.add_term(0.0, 0, 1.0);
    w.add_term(1.0, 0, 1.0);
    CHECK_THROWS_AS(series_compose(germ, w), std::domain_error);
}

TEST_CASE("eval examples") {
    CHECK(series_eval(PolyLogSeries::monomial(2.0, 0, 1.0, 4.0), 0.5) == doctest::Approx(0.25));
    // d^4 log d / 8 at t = e^{-1} -> -e^{-4}/8
    const auto s = PolyLogSeries::monomial(4.0, 1, 1.0 / 8, 8.0);
    CHECK(series_eval(s, std::exp(-1.0)) == doctest::Approx(-std::exp(-4.0) / 8).epsilon(1e-12));
    CHECK(series_eval(PolyLogSeries(4.0), 0.3) == 0.0);
    CHECK_THROWS_AS(series_eval(s, 0.0), std::domain_error);
    CHECK_THROWS_AS(series_eval(s, -1.0), std::domain_error);
}

TEST_CASE("ring laws on random series") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_series(rng, 6.0);
        const auto b = random_series(rng, 6.0);
        const auto c = random_series(rng, 6.0);
        CHECK(close_series(series_mul(a, b), series_mul(b, a)));
        // associativity compared at matching truncation
        auto ab_c = series_mul(series_mul(a, b), c);
        auto a_bc = series_mul(a, series_mul(b, c));
        const double ord = std::min(ab_c.order(), a_bc.order());
        for (const auto& t : ab_c.terms())
            if (t.exponent <= ord)
                CHECK(std::abs(a_bc.coeff_at(t.exponent, t.logpow) - t.coeff) <=
                      1e-9 * (1.0 + std::abs(t.coeff)));
        // distributivity
        const auto lhs = series_mul(a, series_add(b, c));
        const auto rhs = series_add(series_mul(a, b), series_mul(a, c));
        for (const auto& t : lhs.terms())
            if (t.exponent <= std::min(lhs.order(), rhs.order()))
                CHECK(std::abs(rhs.coeff_at(t.exponent, t.logpow) - t.coeff) <=
                      1e-9 * (1.0 + std::abs(t.coeff)));
    }
}

TEST_CASE("eval respects mul up to truncation order") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_series(rng, 4.0);
        const auto b = random_series(rng, 4.0);
        const auto p = series_mul(a, b);
        // |eval(p,t) - eval(a,t) eval(b,t)| = O(t^order): slope test at 1e-2, 1e-3
        const double d2 = std::abs(series_eval(p, 1e-2) - series_eval(a, 1e-2) * series_eval(b, 1e-2));
        const double d3 = std::abs(series_eval(p, 1e-3) - series_eval(a, 1e-3) * series_eval(b, 1e-3));
        if (d2 > 1e-13 && d3 > 1e-15) {
            const double slope = std::log10(d2 / d3);
            CHECK(slope >= p.order() * 0.7);
        }
    }
}

TEST_CASE("compose agrees with pointwise evaluation") {
    std::mt19937 rng(999);
    const double germ[] = {0.3, -1.1, 0.7, 0.2};
    for (int trial = 0; trial < 50; ++trial) {
        PolyLogSeries w(4.0);
        std::uniform_real_distribution<double> expo(0.5, 2.0), coef(-1.0, 1.0);
        const int n = 1 + trial % 3;
        for (int i = 0; i < n; ++i) w.add_term(expo(rng), 0, coef(rng));
        const auto g = series_compose(germ, w);
        for (double t : {1e-2, 1e-3}) {
            const double x = series_eval(w, t);
            const double direct = germ[0] + x * (germ[1] + x * (germ[2] + x * germ[3]));
            CHECK(series_eval(g, t) ==
                  doctest::Approx(direct).epsilon(1e-6).scale(std::max(1.0, std::abs(direct))));
        }
    }
}

TEST_CASE("json round trip") {
    PolyLogSeries s(7.5, 1e-9);
    s.add_term(0.0, 0, 1.0);
    s.add_term(2.5, 1, -0.125);
    const auto text = series_to_json(s);
    const auto back = series_from_json(text);
    CHECK(back.order() == doctest::Approx(7.5));
    CHECK(back.exp_tol() == doctest::Approx(1e-9));
    CHECK(close_series(s, back));
    CHECK(series_to_json(back) == text);
}
