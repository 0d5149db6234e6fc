#pragma once

#include <vector>

#include "bates/grid.hpp"
#include "bates/jump.hpp"
#include "bates/model.hpp"
#include "bates/operators.hpp"
#include "bates/sparse.hpp"

namespace bates {

// One time level of the transformed solution on the full grid (x fastest).
struct Surface {
    std::vector<double> v;
    int time_index = 0;
    double tau = 0.0;
};

// Payoff treatment at tau = 0. The kink of the put payoff sits on a grid
// node; Ktw4 replaces nodal values by a fourth-order kernel smoothing so the
// compact scheme keeps its spatial order. Auto = Ktw4 for Hoc4, None for
// Central2.
enum class PayoffSmoothing { None, Ktw4, Auto };

struct SolverOptions {
    PayoffSmoothing smoothing = PayoffSmoothing::Auto;
    double smoothing_scale = 1.0;   // kernel scale as a multiple of h
    int rannacher_half_steps = 0;   // backward-Euler half-steps before CNAB
    double jump_tol = 1e-10;
    int threads = 1;
};

struct SolveReport {
    Surface u;          // tau = T
    Surface u_prev;     // tau = T - k
    Surface u_prev2;    // tau = T - 2k
    int levels_retained = 0;
    int factor_count = 0;
    long solve_count = 0;
    double wall_seconds = 0.0;
    SchemeKind scheme = SchemeKind::Hoc4;
    int n_steps = 0;
    double k = 0.0;
    double min_dominance_margin = 0.0;
};

// Fourth-order smoothing kernel (cubic B-spline minus 1/6 of its second
// derivative); support [-2, 2], unit mass, vanishing moments 1..3.
double ktw4_kernel(double s);
// Payoff convolved with the kernel at scale h.
double smoothed_payoff(double x, double h);

// Drives the implicit-explicit scheme: Crank-Nicolson on the differential
// part, two-step Adams-Bashforth on the jump integral, an IMEX-Euler first
// step to seed the two-step method. The implicit matrix is factorized once.
class PideStepper {
public:
    PideStepper(const BatesParams& params, const ContractSpec& contract,
                const Grid& grid, SchemeKind scheme,
                const SolverOptions& options = {});

    void advance();   // one time step

    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& u_prev() const { return u_prev_; }
    const std::vector<double>& u_prev2() const { return u_prev2_; }
    int time_index() const { return n_; }
    double tau() const { return n_ * grid_.k; }

    const OperatorMatrices& matrices() const { return mats_; }
    const JumpOperator& jump_operator() const { return jop_; }
    const LUFactors& lu() const { return lu_; }
    const Grid& grid() const { return grid_; }
    double dynamic_dominance_margin() const { return dyn_margin_; }

private:
    BatesParams params_;
    Grid grid_;
    SolverOptions opts_;
    OperatorMatrices mats_;
    JumpOperator jop_;
    LUFactors lu_;
    std::vector<double> u_, u_prev_, u_prev2_;
    std::vector<double> j_prev_, j_cur_, combo_, rhs_;
    double dyn_margin_ = 1.0;
    int n_ = 0;
};

SolveReport solve_pide(const BatesParams& params, const ContractSpec& contract,
                       const Grid& grid, SchemeKind scheme,
                       const SolverOptions& options = {});

// Unsmoothed tau = 0 payoff surface (no boundary override); used by the
// Greek identities and as the reference payoff in tests.
Surface payoff_surface(const Grid& grid);

} // namespace bates
