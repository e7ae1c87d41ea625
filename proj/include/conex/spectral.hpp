#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "conex/grid.hpp"

namespace conex {

/// Singular Sturm-Liouville operator  -(p phi')' + q phi = lambda w phi  on a
/// grid avoiding the endpoints, with a potential q blowing up like kappa/d^2.
/// Dirichlet behavior at both ends is built into the discretization.
struct SingularOperator {
    Grid1D grid;
    std::vector<double> p; // cell samples, > 0
    std::vector<double> q; // cell samples, >= 0 for the singular Yamabe potential
    std::vector<double> w; // measure weight, > 0
    double kappa = 0.0;    // diagnostic singularity strength
    int dim_l = 1;

    static SingularOperator on_arc(const Grid1D& grid, const std::function<double(double)>& q,
                                   double kappa = 0.0);
};

/// Symmetric positive-definite tridiagonal standard form
/// C = D_w^{-1/2} A D_w^{-1/2} of the discretized operator.
struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off; // size diag.size()-1
};

Tridiag assemble_operator(const SingularOperator& op);

/// Number of eigenvalues of C strictly below x (Sturm sequence count).
int sturm_count_below(const Tridiag& C, double x);

struct SpectralSet {
    std::vector<double> lambdas;        // ascending, > 0
    std::vector<double> lambdas_extrap; // Richardson values when attached, else empty
    std::vector<std::vector<double>> phis; // w-orthonormal eigenfunction samples
    Grid1D grid;
    std::vector<double> weight;
    int dim_l = 1;
};

/// First `count` eigenpairs by bisection on Sturm sequences plus inverse
/// iteration, w-orthonormalized. Bisection tolerances are fixed, so results
/// are deterministic for a given grid and count. The per-eigenvalue work is
/// independent and runs under OpenMP; solve_spectrum_serial is the plain-loop
/// reference implementation and must produce identical bits.
SpectralSet solve_spectrum(const SingularOperator& op, int count);
SpectralSet solve_spectrum_serial(const SingularOperator& op, int count);

/// Two-grid solve (N and N/2) attaching Richardson-extrapolated eigenvalues
/// (4 lambda_N - lambda_{N/2}) / 3.
SpectralSet solve_spectrum_richardson(const std::function<SingularOperator(int)>& make_op, int n,
                                      int count);

struct GrowthReport {
    double min_ratio = 0.0;                        // min over i of lambda_i / i^{2/dim_l}
    std::vector<std::pair<double, int>> counting;  // (lambda_i, N(lambda_i))
    int dim_l = 1;
};

/// Growth-law check lambda_i > C1 i^{2/l} and the counting table N(lambda).
GrowthReport verify_growth(const SpectralSet& s);

/// Eigenvalue counting on the table: number of lambdas <= lam.
int count_below(const SpectralSet& s, double lam);

/// Linearized sector potential 2 / (mu^2 sin^2(theta/mu)) on (0, mu*pi);
/// equals 8 / sin^2(2 theta) on the quadrant mu = 1/2.
double liouville_potential(double mu, double theta);

struct DefiningFnReport {
    double sup_d1 = 0.0;     // sup |d'|
    double sup_d2 = 0.0;     // sup |d''|
    double sup_d_d2 = 0.0;   // sup d |d''|
    double coarse_sup_d2 = 0.0;
    bool bounded = false;    // sup |d''| stable under coarsening
};

/// Finite-difference estimate of sup|d''| and sup d^{m-1}|d^(m)|, m <= 2,
/// for defining-function samples on the operator grid. Diagnostic only.
DefiningFnReport defining_function_check(const SingularOperator& op,
                                         std::span<const double> d_samples);

} // namespace conex
