#pragma once

#include <span>
#include <vector>

#include "conex/series.hpp"

namespace conex {

struct ExponentFit {
    double exponent = 0.0;
    bool log_flag = false;
    double r2 = 0.0;
    int n_samples = 0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

/// Least-squares slope of log|y| against log t over the window. A log factor
/// is flagged when extending the model by a log|log t| term cuts the residual
/// by at least 10x; the exponent then comes from the extended model. Samples
/// must not change sign inside the window.
ExponentFit fit_exponent(std::span<const double> t, std::span<const double> y, double t_lo,
                         double t_hi);

/// Decay exponent of a field row against the edge distance, fitted on the
/// near-edge window d < 0.1 * alpha.
ExponentFit edge_decay(std::span<const double> d, std::span<const double> y, double alpha);

struct ResidualReport {
    double slope = 0.0;
    double order = 0.0;     // expansion order a that was removed
    double eps_min = 0.1;
    bool pass = false;
    bool at_noise_floor = false;
    double max_residual = 0.0;
    int n_r = 0;
};

/// Removes the fitted per-angle series from the field, takes the max over
/// angles per radius and verifies that the remainder decays at least like
/// r^{a + eps_min} over the window.
ResidualReport expansion_residual(std::span<const double> r, std::span<const double> v_rows,
                                  int n_theta, const std::vector<PolyLogSeries>& fitted_per_theta,
                                  double order_a, double r_lo, double r_hi, double eps_min = 0.1);

} // namespace conex
