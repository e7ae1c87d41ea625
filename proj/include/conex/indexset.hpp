#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace conex {

/// Sorted set of nonnegative real exponents, deduplicated within exp_tol.
struct ExponentSet {
    enum class Kind { monoid_i, closure_j };

    std::vector<double> elements; // ascending
    std::vector<double> generators;
    double cutoff = 0.0;
    double exp_tol = 1e-9;
    Kind kind = Kind::monoid_i;

    bool contains(double a) const;
    /// Index of the element matching a within exp_tol, or -1.
    int find(double a) const;
};

/// All nonnegative integer combinations of the generators up to the cutoff,
/// 0 included.
ExponentSet monoid_generate(std::span<const double> generators, double cutoff,
                            double exp_tol = 1e-9);

/// Least fixed point of the closure rules: mbars is a subset; for a, b, c in
/// the set, (n-2)/2 + a + b + l((n-2)/2 + c) joins for every integer l >= 0
/// (l >= 1 behind the flag), and a + 2 joins when k != n.
ExponentSet j_closure(std::span<const double> mbars, int n, int k, double cutoff,
                      bool l_from_one = false, double exp_tol = 1e-9);

struct Neighbors {
    std::optional<double> below; // a^-
    std::optional<double> above; // a^+
};

/// Adjacent elements of a within the set; absent at the extremes.
Neighbors neighbors(const ExponentSet& s, double a);

/// Formal log-multiplicity table over the elements of I. An entry of -1
/// means the exponent carries no term at all; resonant exponents (the mbars)
/// always carry at least the log^0 slot. The coefficients are propagated as
/// generically-nonzero markers through the series algebra, so no accidental
/// cancellation is assumed.
std::vector<std::pair<double, int>> log_multiplicities(const ExponentSet& I,
                                                       std::span<const double> mbars, int n,
                                                       int k);

/// N_l = floor(l / n).
int n_floor(int l, int n);

} // namespace conex
