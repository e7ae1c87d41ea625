#include "conex/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace conex {

PolyLogSeries::PolyLogSeries(double order, double exp_tol) : order_(order), exp_tol_(exp_tol) {
    if (!(exp_tol > 0.0)) throw std::domain_error("series: exp_tol must be positive");
}

void PolyLogSeries::add_term(double exponent, int logpow, double coeff) {
    if (!std::isfinite(coeff)) throw std::domain_error("series: non-finite coefficient");
    if (!std::isfinite(exponent) || exponent < -exp_tol_)
        throw std::domain_error("series: exponent must be >= 0");
    if (logpow < 0) throw std::domain_error("series: negative log power");
    if (logpow > max_logpow) throw std::runtime_error("series: log-degree overflow");
    if (exponent < 0.0) exponent = 0.0;
    if (exponent > order_ + exp_tol_) return; // beyond truncation order
    if (coeff == 0.0) return;

    // merge onto an existing representative exponent when one is within tol
    auto lo = std::lower_bound(terms_.begin(), terms_.end(), exponent - exp_tol_,
                               [](const SeriesTerm& t, double e) { return t.exponent < e; });
    double rep = exponent;
    for (auto it = lo; it != terms_.end() && it->exponent < exponent + exp_tol_; ++it) {
        rep = it->exponent;
        break;
    }
    auto pos = std::lower_bound(terms_.begin(), terms_.end(), SeriesTerm{rep, logpow, 0.0},
                                [](const SeriesTerm& a, const SeriesTerm& b) {
                                    if (a.exponent != b.exponent) return a.exponent < b.exponent;
                                    return a.logpow < b.logpow;
                                });
    if (pos != terms_.end() && pos->exponent == rep && pos->logpow == logpow) {
        pos->coeff += coeff;
        if (pos->coeff == 0.0) terms_.erase(pos);
    } else {
        terms_.insert(pos, SeriesTerm{rep, logpow, coeff});
    }
}

double PolyLogSeries::min_exponent() const {
    return terms_.empty() ? 0.0 : terms_.front().exponent;
}

double PolyLogSeries::coeff_at(double exponent, int logpow) const {
    for (const auto& t : terms_)
        if (std::abs(t.exponent - exponent) < exp_tol_ && t.logpow == logpow) return t.coeff;
    return 0.0;
}

int PolyLogSeries::max_logpow_at(double exponent) const {
    int m = -1;
    for (const auto& t : terms_)
        if (std::abs(t.exponent - exponent) < exp_tol_) m = std::max(m, t.logpow);
    return m;
}

PolyLogSeries PolyLogSeries::monomial(double exponent, int logpow, double coeff, double order,
                                      double exp_tol) {
    PolyLogSeries s(order, exp_tol);
    s.add_term(exponent, logpow, coeff);
    return s;
}

PolyLogSeries series_mul(const PolyLogSeries& a, const PolyLogSeries& b) {
    if (a.exp_tol() != b.exp_tol())
        throw std::invalid_argument("series_mul: operands must share exp_tol");
    const double order = std::min(a.order() + b.min_exponent(), b.order() + a.min_exponent());
    PolyLogSeries out(order, a.exp_tol());
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) {
            const double e = ta.exponent + tb.exponent;
            if (e > order + a.exp_tol()) continue;
            out.add_term(e, ta.logpow + tb.logpow, ta.coeff * tb.coeff);
        }
    return out;
}

PolyLogSeries series_add(const PolyLogSeries& a, const PolyLogSeries& b) {
    if (a.exp_tol() != b.exp_tol())
        throw std::invalid_argument("series_add: operands must share exp_tol");
    PolyLogSeries out(std::min(a.order(), b.order()), a.exp_tol());
    for (const auto& t : a.terms()) out.add_term(t.exponent, t.logpow, t.coeff);
    for (const auto& t : b.terms()) out.add_term(t.exponent, t.logpow, t.coeff);
    return out;
}

PolyLogSeries series_scale(const PolyLogSeries& a, double c) {
    PolyLogSeries out(a.order(), a.exp_tol());
    for (const auto& t : a.terms()) out.add_term(t.exponent, t.logpow, c * t.coeff);
    return out;
}

PolyLogSeries series_compose(std::span<const double> germ, const PolyLogSeries& w) {
    if (!w.empty() && w.min_exponent() <= w.exp_tol())
        throw std::domain_error(
            "series_compose: composition base must shift to the constant first");
    PolyLogSeries acc(w.order(), w.exp_tol());
    for (size_t p = germ.size(); p-- > 0;) {
        acc = series_mul(acc, w);
        // multiplication shrinks order bookkeeping; Horner keeps it at w.order
        PolyLogSeries next(w.order(), w.exp_tol());
        for (const auto& t : acc.terms()) next.add_term(t.exponent, t.logpow, t.coeff);
        next.add_term(0.0, 0, germ[p]);
        acc = std::move(next);
    }
    return acc;
}

double series_eval(const PolyLogSeries& s, double t) {
    if (!(t > 0.0)) throw std::domain_error("series_eval: t must be positive");
    const double lt = std::log(t);
    double sum = 0.0;
    const auto& terms = s.terms();
    for (size_t i = terms.size(); i-- > 0;) {
        const auto& tm = terms[i];
        sum += tm.coeff * std::pow(t, tm.exponent) * std::pow(lt, tm.logpow);
    }
    return sum;
}

std::string series_to_json(const PolyLogSeries& s) {
    nlohmann::json j;
    j["order"] = s.order();
    j["exp_tol"] = s.exp_tol();
    j["terms"] = nlohmann::json::array();
    for (const auto& t : s.terms())
        j["terms"].push_back({{"e", t.exponent}, {"j", t.logpow}, {"c", t.coeff}});
    return j.dump();
}

PolyLogSeries series_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PolyLogSeries s(j.at("order").get<double>(), j.at("exp_tol").get<double>());
    for (const auto& t : j.at("terms"))
        s.add_term(t.at("e").get<double>(), t.at("j").get<int>(), t.at("c").get<double>());
    return s;
}

} // namespace conex
