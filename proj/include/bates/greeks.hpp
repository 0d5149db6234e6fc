#pragma once

#include <iosfwd>
#include <vector>

#include "bates/grid.hpp"
#include "bates/model.hpp"
#include "bates/operators.hpp"
#include "bates/stepper.hpp"

namespace bates {

enum class GreekKind { Price, Vega, Gamma, Delta, Theta };

const char* greek_name(GreekKind k);

// A derived quantity on the grid, trimmed in the differenced direction so no
// one-sided extrapolation is needed. Market scaling (strike and discount
// factors) is folded into the stored values; the x-axis is log(S/strike).
struct GreekSurface {
    GreekKind kind = GreekKind::Price;
    SchemeKind scheme = SchemeKind::Hoc4;
    int off_x = 0, off_y = 0;      // trim offsets into the source grid
    std::vector<double> x, y;      // trimmed node coordinates
    std::vector<double> v;         // x fastest
    double strike = 0.0;
    double tau = 0.0;

    int nx() const { return static_cast<int>(x.size()); }
    int ny() const { return static_cast<int>(y.size()); }
    double value(int i, int j) const { return v[static_cast<long>(j) * nx() + i]; }
    // Value at a source-grid node (i_global, j_global); throws if trimmed off.
    double value_at_node(int i_global, int j_global) const;
};

GreekSurface price_surface(const Surface& u, const Grid& grid,
                           const BatesParams& params, const ContractSpec& c,
                           SchemeKind scheme);
GreekSurface vega_surface(const Surface& u, const Grid& grid,
                          const BatesParams& params, const ContractSpec& c,
                          SchemeKind scheme, bool paper_literal = false);
GreekSurface gamma_surface(const Surface& u, const Grid& grid,
                           const BatesParams& params, const ContractSpec& c,
                           SchemeKind scheme, bool paper_literal = false);
GreekSurface delta_surface(const Surface& u, const Grid& grid,
                           const BatesParams& params, const ContractSpec& c,
                           SchemeKind scheme);
GreekSurface theta_surface(const SolveReport& rep, const Grid& grid,
                           const BatesParams& params, const ContractSpec& c);

// Bicubic (4x4-node) Lagrange interpolation; reproduces nodal values exactly
// and keeps fourth-order accuracy between nodes. The sample box is clamped
// at the surface edges.
double evaluate_at_xy(const GreekSurface& gs, double x, double y);
// Market-point evaluation through the surface's own strike.
double evaluate_at(const GreekSurface& gs, double spot, double sigma,
                   const BatesParams& params);

// CSV export: header "S,sigma,value", one row per node, y-major order.
void export_csv(const GreekSurface& gs, const BatesParams& params,
                std::ostream& os);

// Finite-difference weights for the m-th derivative at point z from the
// given nodes (Fornberg's algorithm); exact for polynomials of degree
// n_nodes - 1.
void fd_weights(double z, const double* nodes, int n_nodes, int m, double* w);

} // namespace bates
