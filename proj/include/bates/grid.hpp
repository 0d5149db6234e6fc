#pragma once

#include <vector>

#include "bates/errors.hpp"

namespace bates {

// Truncated uniform tensor grid: x in [-R1, R1], y in [L2, R2] with equal
// space step h in both directions, time step k ~ mesh_ratio * h^2.
struct GridSpec {
    double R1 = 4.0;
    double L2 = 0.1;
    double R2 = 4.1;
    double h = 0.1;
    double mesh_ratio = 0.4;   // target k / h^2
    double expiry = 0.5;       // time horizon T

    GridSpec with_h(double hh) const {
        GridSpec s = *this;
        s.h = hh;
        return s;
    }
};

struct Grid {
    int N = 0;    // x nodes are i*h, i = -N..N  (2N+1 of them)
    int M = 0;    // y nodes are L2 + j*h, j = 0..M  (M+1 of them)
    double h = 0.0;
    double k = 0.0;
    int n_steps = 0;
    std::vector<double> x;   // size 2N+1
    std::vector<double> y;   // size M+1
    double R1 = 0.0, L2 = 0.0, R2 = 0.0, mesh_ratio = 0.0, T = 0.0;

    int nx() const { return 2 * N + 1; }
    int ny() const { return M + 1; }
    int n_nodes() const { return nx() * ny(); }
    // Row-major, x fastest.
    int idx(int ix, int jy) const { return jy * nx() + ix; }
};

Grid build_grid(const GridSpec& spec);

// Index map between a coarse grid and a nested finer grid over the same
// domain: coarse node (i, j) coincides with fine node (i*stride, j*stride).
struct NodeMap {
    int stride = 1;
};

NodeMap common_nodes(const Grid& coarse, const Grid& fine);

} // namespace bates
