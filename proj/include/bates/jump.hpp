#pragma once

#include <vector>

#include "bates/grid.hpp"
#include "bates/model.hpp"

namespace bates {

// How the convolution extends u beyond the x-grid and closes the tails of
// the jump density. FarField uses the put's Dirichlet limits (1 left,
// 0 right); OnesTest overrides the right side with 1 so that u == 1 maps to
// lambda exactly (normalization test hook).
enum class TailMode { FarField, OnesTest };

// Discretization of lambda * integral u(x + z, y) p(z) dz as a lattice
// convolution: quadrature offsets z_m = m*h land on grid nodes, so applying
// the operator is a pure stencil sweep per y-row. Gaussian mass outside the
// window is closed analytically with the far-field values.
struct JumpOperator {
    int m_lo = 0, m_hi = 0;        // lattice offsets, z = m*h
    std::vector<double> w;         // quadrature weights; sum = window mass
    double z_lo = 0.0, z_hi = 0.0; // window bounds (lattice-aligned)
    double left_tail = 0.0;        // Gaussian mass below z_lo
    double right_tail = 0.0;       // Gaussian mass above z_hi
    double lambda = 0.0;
    double half_width_sigmas = 0.0;
};

JumpOperator build_jump_operator(const BatesParams& params, const Grid& grid,
                                 double tol = 1e-10);

// out[i,j] = lambda * ( sum_m w_m * u~(i+m, j) + tail closure ), row by row.
void apply_jump_into(const JumpOperator& op, const std::vector<double>& u,
                     const Grid& grid, std::vector<double>& out,
                     TailMode mode = TailMode::FarField, int threads = 1);

std::vector<double> apply_jump(const JumpOperator& op,
                               const std::vector<double>& u, const Grid& grid,
                               TailMode mode = TailMode::FarField,
                               int threads = 1);

// Standard normal distribution function.
double normal_cdf(double x);

} // namespace bates
