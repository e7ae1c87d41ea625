#pragma once

#include "conex/grid.hpp"
#include "conex/series.hpp"

namespace conex {

/// Cone geometry: ambient dimension n (n = 2 selects the planar Liouville
/// setting), cone codimension k, arc angle alpha of the k = 2 cross-section,
/// and truncation radius M.
struct ConeSpec {
    int n = 3;
    int k = 2;
    double alpha = 3.141592653589793;
    double M = 1.0;

    void validate() const;
};

/// Discrete blow-up profile u_S on the arc together with the normalized
/// unknown w = d_S^{(n-2)/2} u_S, the fitted edge expansion of w, and the
/// potential floor sigma = min u_S^{4/(n-2)}.
struct ProfileSolution {
    ConeSpec cone;
    Grid1D grid;
    std::vector<double> u_S;
    std::vector<double> w;
    PolyLogSeries c_S;
    double sigma = 0.0;
    double residual = 0.0;
    int newton_steps = 0;
};

/// Arc defining function d_S(theta) = (alpha/pi) sin(pi theta / alpha):
/// vanishes with unit slope at both endpoints, smooth cap in the interior.
double defining_distance(double theta, double alpha);
double defining_distance_d1(double theta, double alpha);
double defining_distance_d2(double theta, double alpha);

/// Damped-Newton solve of the reduced profile equation on the arc (k = 2):
///   u'' + ((n-2)^2/4) u = (n(n-2)/4) u^{(n+2)/(n-2)},  u = +inf at both ends,
/// in the bounded variable w = d_S^{(n-2)/2} u with w -> 1 at the endpoints.
ProfileSolution solve_profile(const ConeSpec& cone, const Grid1D& grid);

/// Exact half-plane profile u_S = (sin theta)^{-(n-2)/2} on (0, pi).
double halfplane_oracle(int n, double theta);

/// Ball solution u_M = (2M/(M^2 - |x|^2))^{(n-2)/2}, finite for |x| < M.
double ball_barrier(int n, double M, double x_norm);

/// Two-solution comparison constant (4/M)^{(n-2)/2} on the half cone.
double comparison_bound(int n, double M);

/// Strict admissibility beta(n + beta - 2) - n(n+2) sigma / 4 < 0.
bool admissible_beta(int n, double sigma, double beta);

/// Positive root of beta(n + beta - 2) = n(n+2) sigma / 4.
double max_beta(int n, double sigma);

/// Max-norm residual of the discrete reduced equation at the given w.
double profile_residual(const ConeSpec& cone, const Grid1D& grid, std::span<const double> w);

} // namespace conex
