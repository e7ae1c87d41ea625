#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace conex {

enum class GridScheme { cell_centered, endpoint_offset };

/// Uniform 1-D grid on the open interval (0, length). Nodes never touch the
/// endpoints: cell-centered nodes sit at (i+1/2)h, endpoint-offset nodes at
/// (i+1)h with one spacing of clearance on each side.
struct Grid1D {
    int count = 0;
    double length = 0.0;
    double spacing = 0.0;
    GridScheme scheme = GridScheme::cell_centered;
    std::vector<double> nodes;

    static Grid1D cell_centered(double length, int count);
    static Grid1D endpoint_offset(double length, int count);

    double node(int i) const { return nodes[static_cast<size_t>(i)]; }
};

/// Log-spaced radii r[i] = r_lo * (r_hi/r_lo)^(i/(count-1)), endpoints included.
std::vector<double> log_spaced(double r_lo, double r_hi, int count);

} // namespace conex
