#pragma once

#include <iosfwd>
#include <vector>

#include "bates/grid.hpp"
#include "bates/model.hpp"
#include "bates/sparse.hpp"

namespace bates {

enum class SchemeKind { Central2, Hoc4 };

const char* scheme_name(SchemeKind s);

// 3x3 stencil weights, indexed [dy+1][dx+1].
struct Stencil9 {
    double w[3][3] = {};
    double& at(int dx, int dy) { return w[dy + 1][dx + 1]; }
    double at(int dx, int dy) const { return w[dy + 1][dx + 1]; }
};

// Coefficients of the transformed spatial operator
//   L u = a(y) (u_xx + u_yy) + b(y) u_xy + c(y) u_x + d(y) u_y,
// all linear in y.
struct PdeCoeffs {
    double a, b, c, d;     // values at a given y
    double a1, b1, c1, d1; // y-derivatives (constant)
};

PdeCoeffs pde_coeffs(const BatesParams& params, double y);

// Interior stencils of a scheme at height y: the operator stencil (applied
// to u) and the mass stencil (applied to the right-hand side). For Central2
// the mass stencil is the identity. For Hoc4 both are the compact
// fourth-order pair obtained by substituting the PDE into the truncation
// error of the second-order scheme.
struct StencilPair {
    Stencil9 op;
    Stencil9 mass;
};

StencilPair scheme_stencils(SchemeKind scheme, const BatesParams& params,
                            double y, double h);

// Assembled spatial discretization: 'gen' approximates the operator,
// 'mass' the compact right-hand-side filter. Only true interior rows
// (1 <= i <= 2N-1, 1 <= j <= M-1) are populated; boundary rows are handled
// as constraints when the time-stepping matrices are composed.
struct OperatorPair {
    SparseMatrix gen;
    SparseMatrix mass;
};

OperatorPair assemble_generator(SchemeKind scheme, const BatesParams& params,
                                const Grid& grid);

// One-sided difference weights (innermost node first, scaled by 1/h) used
// for the homogeneous Neumann rows: 3-point second order for Central2,
// 5-point fourth order for Hoc4.
std::vector<double> neumann_weights(SchemeKind scheme, double h);

// Time-stepping matrices: a_impl = mass - (k/2) gen, a_expl = mass +
// (k/2) gen on interior rows. Constraint rows of a_impl carry the Dirichlet
// identity at the x-boundaries and the one-sided Neumann equation at the
// y-boundaries; a_expl and mass_rhs are empty there, and every step resets
// the right-hand side of a constraint row to constraint_rhs.
struct OperatorMatrices {
    SchemeKind scheme = SchemeKind::Hoc4;
    double k = 0.0;
    SparseMatrix a_impl, a_expl, mass_rhs;
    std::vector<unsigned char> is_dirichlet;    // x-boundary rows
    std::vector<unsigned char> is_constraint;   // Dirichlet or Neumann rows
    std::vector<double> constraint_rhs;
};

OperatorMatrices assemble(SchemeKind scheme, const BatesParams& params,
                          const Grid& grid);

// Debug dump in coordinate text format: one "row col value" line per entry.
void dump_coo(const SparseMatrix& m, std::ostream& os);

} // namespace bates
