#pragma once

#include <span>
#include <string>
#include <vector>

namespace conex {

struct SeriesTerm {
    double exponent = 0.0;
    int logpow = 0;
    double coeff = 0.0;
};

/// Finite poly-log expansion  sum_{(i,j)} c_{i,j} t^i (log t)^j  with real
/// exponents i >= 0 and integer log powers j >= 0. Exponents produced by
/// eigenvalue computations are inexact, so exponents closer than `exp_tol`
/// are merged onto one representative. The formal truncation order is
/// carried explicitly; terms above it are dropped on construction and every
/// algebra operation tracks the order of the result.
class PolyLogSeries {
public:
    static constexpr int max_logpow = 32;

    PolyLogSeries() = default;
    explicit PolyLogSeries(double order, double exp_tol = 1e-9);

    /// Merge a term into the series. Throws on non-finite coefficients,
    /// negative exponents and log powers beyond the hard cap. Terms whose
    /// exponent exceeds the truncation order are discarded.
    void add_term(double exponent, int logpow, double coeff);

    const std::vector<SeriesTerm>& terms() const { return terms_; }
    double order() const { return order_; }
    double exp_tol() const { return exp_tol_; }
    bool empty() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    /// Smallest stored exponent; 0 for the empty series.
    double min_exponent() const;
    /// Coefficient at (exponent, logpow), matching exponents within exp_tol.
    double coeff_at(double exponent, int logpow) const;
    int max_logpow_at(double exponent) const; // -1 when the exponent is absent

    static PolyLogSeries monomial(double exponent, int logpow, double coeff,
                                  double order, double exp_tol = 1e-9);

private:
    std::vector<SeriesTerm> terms_; // sorted by (exponent, logpow)
    double order_ = 0.0;
    double exp_tol_ = 1e-9;
};

/// Term-wise convolution: exponents add, log powers add. The result is
/// truncated at min(a.order + b.min_exponent, b.order + a.min_exponent).
PolyLogSeries series_mul(const PolyLogSeries& a, const PolyLogSeries& b);

PolyLogSeries series_add(const PolyLogSeries& a, const PolyLogSeries& b);
PolyLogSeries series_scale(const PolyLogSeries& a, double c);

/// Composition G(w) of an analytic germ G (Taylor coefficients g0, g1, ...
/// about 0) with a series w of strictly positive minimum exponent, evaluated
/// by Horner recursion in the series algebra and truncated at w.order.
PolyLogSeries series_compose(std::span<const double> germ, const PolyLogSeries& w);

/// Evaluate at t > 0, descending-exponent summation order.
double series_eval(const PolyLogSeries& s, double t);

std::string series_to_json(const PolyLogSeries& s);
PolyLogSeries series_from_json(const std::string& text);

} // namespace conex
