#include "conex/grid.hpp"

#include <cmath>

namespace conex {

Grid1D Grid1D::cell_centered(double length, int count) {
    if (length <= 0.0) throw std::domain_error("grid: length must be positive");
    if (count < 16) throw std::domain_error("grid: count must be >= 16");
    Grid1D g;
    g.count = count;
    g.length = length;
    g.scheme = GridScheme::cell_centered;
    g.spacing = length / count;
    g.nodes.resize(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) g.nodes[static_cast<size_t>(i)] = (i + 0.5) * g.spacing;
    return g;
}

Grid1D Grid1D::endpoint_offset(double length, int count) {
    if (length <= 0.0) throw std::domain_error("grid: length must be positive");
    if (count < 16) throw std::domain_error("grid: count must be >= 16");
    Grid1D g;
    g.count = count;
    g.length = length;
    g.scheme = GridScheme::endpoint_offset;
    g.spacing = length / (count + 1);
    g.nodes.resize(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) g.nodes[static_cast<size_t>(i)] = (i + 1) * g.spacing;
    return g;
}

std::vector<double> log_spaced(double r_lo, double r_hi, int count) {
    if (r_lo <= 0.0 || r_hi <= r_lo) throw std::domain_error("log_spaced: need 0 < r_lo < r_hi");
    if (count < 2) throw std::domain_error("log_spaced: count must be >= 2");
    std::vector<double> r(static_cast<size_t>(count));
    const double s0 = std::log(r_lo), s1 = std::log(r_hi);
    const double ds = (s1 - s0) / (count - 1);
    for (int i = 0; i < count; ++i) r[static_cast<size_t>(i)] = std::exp(s0 + i * ds);
    r.front() = r_lo;
    r.back() = r_hi;
    return r;
}

} // namespace conex
