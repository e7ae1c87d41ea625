#pragma once

#include <span>
#include <vector>

#include "conex/series.hpp"

namespace conex {

/// Roots of the indicial quadratic m^2 + (k-2) m - lambda = 0 of the radial
/// Euler operator  r^2 A'' + (k-1) r A' - lambda A.  Vieta:
/// m_plus * m_minus = -lambda, m_plus + m_minus = -(k-2).
struct IndicialPair {
    double m_plus = 0.0;
    double m_minus = 0.0;
    int k = 2;
    double lambda = 0.0;
};

IndicialPair indicial_roots(int k, double lambda);

/// Particular poly-log solution of r^2 A'' + (k-1) r A' - lambda A = forcing,
/// term by term. Off resonance a term c r^a (log r)^j is solved by
/// undetermined coefficients within log degree j; at resonance a = m_plus the
/// log degree is promoted to j+1 with leading coefficient
/// c / ((j+1)(m_plus - m_minus)). The free r^m_plus homogeneous coefficient is
/// fixed to zero.
PolyLogSeries particular_poly_log(int k, double lambda, const PolyLogSeries& forcing);

/// One radial mode: forcing samples F on a log-spaced radius grid (0, r0]
/// plus the anchor value A(r0).
struct RadialMode {
    double lambda = 0.0;
    int k = 2;
    double r0 = 1.0;
    double A_at_r0 = 0.0;
    std::vector<double> r;       // log-spaced, ascending, r.back() == r0
    std::vector<double> forcing; // F samples on r
};

RadialMode make_radial_mode(int k, double lambda, double r0, double A_at_r0, int count,
                            double r_min_frac = 1e-6);

/// Bounded-branch solution by composite quadrature in log coordinates:
///   A = C2 r^{m+} - r^{m-}/(m+ - m-) * int_0^r s^{-1-m-} F ds
///             - r^{m+}/(m+ - m-) * int_r^{r0} s^{-1-m+} F ds,
/// with C2 fixed so the value at r0 equals A_at_r0 and the r^{m-} branch
/// eliminated. The first panel [0, r_min] is integrated analytically from a
/// local power-law fit of F.
std::vector<double> solve_radial_ode(const RadialMode& mode);

/// Discrete Euler operator applied on the log grid (interior nodes), for
/// residual checks: returns r^2 A'' + (k-1) r A' - lambda A at r[1..n-2].
std::vector<double> euler_apply(int k, double lambda, std::span<const double> r,
                                std::span<const double> A);

} // namespace conex
