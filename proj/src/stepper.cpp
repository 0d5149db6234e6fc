#include "bates/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace bates {

namespace {

double bspline3(double s) {
    const double t = std::abs(s);
    if (t >= 2.0) return 0.0;
    if (t >= 1.0) {
        const double q = 2.0 - t;
        return q * q * q / 6.0;
    }
    return 2.0 / 3.0 - t * t + t * t * t / 2.0;
}

double bspline3_dd(double s) {
    const double t = std::abs(s);
    if (t >= 2.0) return 0.0;
    if (t >= 1.0) return 2.0 - t;
    return 3.0 * t - 2.0;
}

// 8-point Gauss-Legendre on [-1, 1].
constexpr double kGlx[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498, 0.5255324099163290,
    0.7966664774136267, 0.9602898564975363};
constexpr double kGlw[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

} // namespace

double ktw4_kernel(double s) {
    return bspline3(s) - bspline3_dd(s) / 6.0;
}

double smoothed_payoff(double x, double h) {
    // Integrate Phi4(s) * payoff(x - s h) over [-2, 2], splitting at the
    // kernel's polynomial breakpoints and at the payoff kink s = x/h.
    double breaks[6] = {-2.0, -1.0, 0.0, 1.0, 2.0, 2.0};
    int nb = 5;
    const double kink = x / h;
    if (kink > -2.0 && kink < 2.0) {
        breaks[nb++] = kink;
        std::sort(breaks, breaks + nb);
    }
    double total = 0.0;
    for (int p = 0; p + 1 < nb; ++p) {
        const double a = breaks[p], b = breaks[p + 1];
        if (b <= a) continue;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (int q = 0; q < 8; ++q) {
            const double s = mid + half * kGlx[q];
            acc += kGlw[q] * ktw4_kernel(s) * put_payoff_transformed(x - s * h);
        }
        total += half * acc;
    }
    return total;
}

Surface payoff_surface(const Grid& grid) {
    Surface s;
    s.v.resize(grid.n_nodes());
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i)
            s.v[grid.idx(i, j)] = put_payoff_transformed(grid.x[i]);
    return s;
}

PideStepper::PideStepper(const BatesParams& params, const ContractSpec& contract,
                         const Grid& grid, SchemeKind scheme,
                         const SolverOptions& options)
    : params_(params), grid_(grid), opts_(options) {
    params.validate();
    contract.validate();

    mats_ = assemble(scheme, params, grid);
    jop_ = build_jump_operator(params, grid, options.jump_tol);
    lu_ = lu_factorize(mats_.a_impl);

    // Dominance check over the dynamic rows only; constraint rows (Dirichlet
    // identities, one-sided Neumann equations) are imposed, not iterated.
    double margin = 1.0;
    const SparseMatrix& ai = mats_.a_impl;
    for (int r = 0; r < ai.n; ++r) {
        if (mats_.is_constraint[r]) continue;
        double diag = 0.0, off = 0.0;
        for (int k = ai.row_ptr[r]; k < ai.row_ptr[r + 1]; ++k) {
            if (ai.col[k] == r) diag = std::abs(ai.val[k]);
            else off += std::abs(ai.val[k]);
        }
        margin = std::min(margin, diag > 0.0 ? (diag - off) / diag : -1.0);
    }
    dyn_margin_ = margin;
    if (margin < 0.10)
        std::fprintf(stderr,
                     "bates: note: implicit-matrix dominance margin %.3f < 0.10 "
                     "(h=%g, k=%g)\n", margin, grid.h, grid.k);

    const bool smooth =
        options.smoothing == PayoffSmoothing::Ktw4 ||
        (options.smoothing == PayoffSmoothing::Auto && scheme == SchemeKind::Hoc4);

    const int nx = grid.nx();
    u_.resize(grid.n_nodes());
    std::vector<double> row(nx);
    const double scale = grid.h * options.smoothing_scale;
    for (int i = 0; i < nx; ++i)
        row[i] = smooth ? smoothed_payoff(grid.x[i], scale)
                        : put_payoff_transformed(grid.x[i]);
    for (int j = 0; j < grid.ny(); ++j)
        std::copy(row.begin(), row.end(), u_.begin() + static_cast<long>(j) * nx);
    for (int rix = 0; rix < grid.n_nodes(); ++rix)
        if (mats_.is_dirichlet[rix]) u_[rix] = mats_.constraint_rhs[rix];

    apply_jump_into(jop_, u_, grid_, j_prev_, TailMode::FarField, opts_.threads);
    u_prev_ = u_;
    u_prev2_ = u_;
}

void PideStepper::advance() {
    const double k = grid_.k;
    const int n_nodes = grid_.n_nodes();

    // Optional damped startup: pairs of backward-Euler half-steps. The
    // half-step matrix M - (k/2) A is the CN implicit matrix, so the single
    // factorization is reused.
    if (2 * n_ < opts_.rannacher_half_steps) {
        for (int half = 0; half < 2; ++half) {
            apply_jump_into(jop_, u_, grid_, j_cur_, TailMode::FarField,
                            opts_.threads);
            if (half == 0) j_prev_ = j_cur_;   // lag term for the next CNAB step
            combo_.resize(n_nodes);
            for (int i = 0; i < n_nodes; ++i)
                combo_[i] = u_[i] + 0.5 * k * j_cur_[i];
            mats_.mass_rhs.apply_into(combo_, rhs_);
            for (int i = 0; i < n_nodes; ++i)
                if (mats_.is_constraint[i]) rhs_[i] = mats_.constraint_rhs[i];
            if (half == 0) std::swap(u_prev2_, u_prev_);
            std::swap(u_prev_, u_);
            lu_.solve_into(rhs_, u_);
        }
    } else {
        if (n_ == 0) {
            // IMEX-Euler seed: explicit single jump evaluation.
            combo_ = j_prev_;
        } else {
            apply_jump_into(jop_, u_, grid_, j_cur_, TailMode::FarField,
                            opts_.threads);
            combo_.resize(n_nodes);
            for (int i = 0; i < n_nodes; ++i)
                combo_[i] = 1.5 * j_cur_[i] - 0.5 * j_prev_[i];
            std::swap(j_prev_, j_cur_);
        }

        mats_.a_expl.apply_into(u_, rhs_);
        std::vector<double> mj;
        mats_.mass_rhs.apply_into(combo_, mj);
        for (int i = 0; i < n_nodes; ++i) rhs_[i] += k * mj[i];
        for (int i = 0; i < n_nodes; ++i)
            if (mats_.is_constraint[i]) rhs_[i] = mats_.constraint_rhs[i];

        std::swap(u_prev2_, u_prev_);
        std::swap(u_prev_, u_);
        lu_.solve_into(rhs_, u_);
    }
    ++n_;

    for (int i = 0; i < n_nodes; ++i) {
        if (!std::isfinite(u_[i])) {
            std::ostringstream os;
            os << "stepper: non-finite value at time step " << n_
               << " (node " << i << ")";
            throw NumericError(os.str());
        }
    }
}

SolveReport solve_pide(const BatesParams& params, const ContractSpec& contract,
                       const Grid& grid, SchemeKind scheme,
                       const SolverOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    PideStepper stepper(params, contract, grid, scheme, options);
    for (int n = 0; n < grid.n_steps; ++n) stepper.advance();

    SolveReport rep;
    rep.scheme = scheme;
    rep.n_steps = grid.n_steps;
    rep.k = grid.k;
    rep.u.v = stepper.u();
    rep.u.time_index = grid.n_steps;
    rep.u.tau = grid.T;
    rep.u_prev.v = stepper.u_prev();
    rep.u_prev.time_index = grid.n_steps - 1;
    rep.u_prev.tau = grid.T - grid.k;
    rep.u_prev2.v = stepper.u_prev2();
    rep.u_prev2.time_index = grid.n_steps - 2;
    rep.u_prev2.tau = grid.T - 2.0 * grid.k;
    rep.levels_retained = std::min(3, grid.n_steps + 1);
    rep.factor_count = stepper.lu().factor_count();
    rep.solve_count = stepper.lu().solve_count();
    rep.min_dominance_margin = stepper.dynamic_dominance_margin();
    const auto t1 = std::chrono::steady_clock::now();
    rep.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return rep;
}

} // namespace bates
