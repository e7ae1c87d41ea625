#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "conex/spectral.hpp"

namespace conex {

/// Sector of angle mu*pi and radius M with a polar grid: n_r log-spaced
/// radius rings (boundary rings included), n_theta cell-centered angles.
struct SectorSpec {
    double mu = 0.5;
    double M = 1.0;
    int n_r = 64;
    int n_theta = 32;

    void validate() const;
};

enum class BoundaryMode { full_blowup, prescribed_arc_trace };

struct SectorSolveOptions {
    double r_min_frac = 1e-2; // bottom ring radius / M
    double r_top_frac = 1.0;  // top (trace) ring radius / M; full blow-up uses < 1
    double tol = 1e-9;        // max-norm residual target
    int max_sweeps = 200000;
};

/// Field on the polar grid, r-ring major: value(i, j) = data[i * n_theta + j].
struct SectorField {
    SectorSpec spec;
    BoundaryMode mode = BoundaryMode::full_blowup;
    std::vector<double> r;     // ring radii, ascending, size n_r
    std::vector<double> theta; // cell-centered angles, size n_theta
    std::vector<double> u, u_T, v;
    std::vector<double> arc_trace; // v on the top ring
    int sweeps = 0;
    double residual = 0.0;
    bool trace_decay_warning = false;

    double value(const std::vector<double>& f, int i, int j) const {
        return f[static_cast<size_t>(i) * static_cast<size_t>(spec.n_theta) +
                 static_cast<size_t>(j)];
    }
};

/// Exact infinite-cone solution u_T = -log(mu r sin(theta/mu)).
double cone_solution(double mu, double r, double theta);

/// Hyperbolic density of the finite sector via zeta = (z/M)^{1/mu} followed
/// by xi = -(zeta + 1/zeta)/2 onto the upper half plane:
/// u = log(|f'(z)| / Im f(z)). Blows up on the whole sector boundary.
double conformal_oracle(double mu, double M, std::complex<double> z);

/// The same map evaluated as u - u_T = log|1 - zeta^2| - log(1 - |zeta|^2),
/// which is exact and free of the log r cancellation near the corner.
double conformal_oracle_v(double mu, double M, double r, double theta);

/// Exact oracle field sampled on the sector grid (OpenMP kernel; the serial
/// twin is the testing reference).
SectorField oracle_field(const SectorSpec& spec, const SectorSolveOptions& opt = {});
SectorField oracle_field_serial(const SectorSpec& spec, const SectorSolveOptions& opt = {});

/// Nonlinear relaxation solve of
///   r^2 v_rr + r v_r + v_tt - (2/mu^2) v / sin^2(theta/mu)
///        = (e^{2v} - 1 - 2v) / (mu^2 sin^2(theta/mu)),
/// with v = 0 on the straight edges and on the bottom ring, and v equal to
/// the arc trace on the top ring. Full blow-up mode takes the trace from the
/// conformal oracle. Ordered Gauss-Seidel sweeps (SOR) with a local scalar
/// Newton per node; single-threaded over the shared grid state.
SectorField solve_sector(const SectorSpec& spec, BoundaryMode mode,
                         std::span<const double> arc_trace = {},
                         const SectorSolveOptions& opt = {});

/// Per-ring weighted projections A_i(r) = <v(r, .), phi_i>_w for i < count.
/// The basis grid must match the field's theta grid. OpenMP over (mode, ring)
/// with a serial reference twin.
std::vector<std::vector<double>> project_modes(const SectorField& field, const SpectralSet& basis,
                                               int count);
std::vector<std::vector<double>> project_modes_serial(const SectorField& field,
                                                      const SpectralSet& basis, int count);

} // namespace conex
