// Times the OpenMP kernels against their serial reference implementations:
// eigenvalue sweep, oracle field evaluation, and modal projection.

#include <chrono>
#include <cstdio>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "conex/grid.hpp"
#include "conex/liouville.hpp"
#include "conex/spectral.hpp"

using namespace conex;
constexpr double kPi = std::numbers::pi;

namespace {
template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

SingularOperator quadrant_op(int n) {
    const auto g = Grid1D::cell_centered(kPi / 2, n);
    return SingularOperator::on_arc(
        g, [](double th) { return liouville_potential(0.5, th); }, 2.0);
}
} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%-34s %12s %12s %8s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

    {
        const auto op = quadrant_op(16384);
        const double ts = time_best_of(3, [&] { (void)solve_spectrum_serial(op, 8); });
        const double tp = time_best_of(3, [&] { (void)solve_spectrum(op, 8); });
        std::printf("%-34s %12.4f %12.4f %8.2f\n", "spectrum N=16384, 8 modes", ts, tp, ts / tp);
    }
    {
        SectorSpec spec{0.5, 1.0, 512, 256};
        const double ts = time_best_of(3, [&] { (void)oracle_field_serial(spec); });
        const double tp = time_best_of(3, [&] { (void)oracle_field(spec); });
        std::printf("%-34s %12.4f %12.4f %8.2f\n", "oracle field 512x256", ts, tp, ts / tp);
    }
    {
        SectorSpec spec{0.5, 1.0, 1024, 512};
        const auto field = oracle_field(spec);
        const auto basis = solve_spectrum(quadrant_op(spec.n_theta), 8);
        const double ts = time_best_of(3, [&] { (void)project_modes_serial(field, basis, 8); });
        const double tp = time_best_of(3, [&] { (void)project_modes(field, basis, 8); });
        std::printf("%-34s %12.4f %12.4f %8.2f\n", "projection 1024 rings, 8 modes", ts, tp,
                    ts / tp);
    }
    return 0;
}
