#include "bates/grid.hpp"

#include <cmath>
#include <sstream>

namespace bates {

namespace {

// R/h must be an integer count; reject anything beyond rounding slack.
int exact_divide(double range, double h, const char* bound_name) {
    const double q = range / h;
    const int n = static_cast<int>(std::lround(q));
    if (n <= 0 || std::abs(q - n) > 1e-9 * std::max(1.0, std::abs(q))) {
        std::ostringstream os;
        os << "grid: " << bound_name << " = " << range
           << " is not an integer multiple of h = " << h;
        throw ConfigError(os.str());
    }
    return n;
}

} // namespace

Grid build_grid(const GridSpec& spec) {
    if (!(spec.h > 0.0)) throw ConfigError("grid: h must be > 0");
    if (!(spec.mesh_ratio > 0.0)) throw ConfigError("grid: mesh_ratio must be > 0");
    if (!(spec.R1 > 0.0)) throw ConfigError("grid: R1 must be > 0");
    if (!(spec.R2 > spec.L2 && spec.L2 > 0.0))
        throw ConfigError("grid: need R2 > L2 > 0");
    if (!(spec.expiry > 0.0)) throw ConfigError("grid: expiry must be > 0");

    Grid g;
    g.h = spec.h;
    g.R1 = spec.R1;
    g.L2 = spec.L2;
    g.R2 = spec.R2;
    g.mesh_ratio = spec.mesh_ratio;
    g.T = spec.expiry;

    g.N = exact_divide(spec.R1, spec.h, "R1");
    g.M = exact_divide(spec.R2 - spec.L2, spec.h, "R2 - L2");

    // k rounded down so n_steps * k hits the horizon exactly and k <= c*h^2.
    const double k_target = spec.mesh_ratio * spec.h * spec.h;
    g.n_steps = static_cast<int>(std::ceil(spec.expiry / k_target - 1e-12));
    if (g.n_steps < 1) g.n_steps = 1;
    g.k = spec.expiry / g.n_steps;

    g.x.resize(g.nx());
    for (int i = -g.N; i <= g.N; ++i) g.x[i + g.N] = i * g.h;
    g.y.resize(g.ny());
    for (int j = 0; j <= g.M; ++j) g.y[j] = spec.L2 + j * g.h;

    return g;
}

NodeMap common_nodes(const Grid& coarse, const Grid& fine) {
    auto same = [](double a, double b) { return std::abs(a - b) < 1e-12; };
    if (!same(coarse.R1, fine.R1) || !same(coarse.L2, fine.L2) ||
        !same(coarse.R2, fine.R2)) {
        throw ConfigError("common_nodes: grids cover different domains");
    }
    const double q = coarse.h / fine.h;
    const int stride = static_cast<int>(std::lround(q));
    if (stride < 1 || std::abs(q - stride) > 1e-9) {
        std::ostringstream os;
        os << "common_nodes: coarse h = " << coarse.h
           << " is not an integer multiple of fine h = " << fine.h;
        throw ConfigError(os.str());
    }
    return NodeMap{stride};
}

} // namespace bates
