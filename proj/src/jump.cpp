#include "bates/jump.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace bates {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

namespace {

// Smallest half-width (in std units) whose two-sided omitted Gaussian mass
// is below tol.
double tail_half_width(double tol) {
    double lo = 0.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (2.0 * normal_cdf(-mid) > tol) lo = mid;
        else hi = mid;
    }
    return hi;
}

} // namespace

JumpOperator build_jump_operator(const BatesParams& params, const Grid& grid,
                                 double tol) {
    if (!(tol > 0.0) || tol >= 1.0)
        throw ConfigError("jump: tol must be in (0, 1)");
    const double g = params.gamma_j;
    const double d = params.delta_j;
    const double h = grid.h;

    JumpOperator op;
    op.lambda = params.lambda;
    op.half_width_sigmas = tail_half_width(tol);

    // Round the window outward to lattice points; Simpson needs an even
    // interval count.
    op.m_lo = static_cast<int>(std::floor((g - op.half_width_sigmas * d) / h));
    op.m_hi = static_cast<int>(std::ceil((g + op.half_width_sigmas * d) / h));
    if ((op.m_hi - op.m_lo) % 2 != 0) --op.m_lo;
    op.z_lo = op.m_lo * h;
    op.z_hi = op.m_hi * h;

    if (op.z_hi - op.z_lo > 2.0 * grid.R1) {
        std::ostringstream os;
        os << "jump: quadrature window [" << op.z_lo << ", " << op.z_hi
           << "] exceeds the domain width 2*R1 = " << 2.0 * grid.R1
           << "; increase R1 or coarsen jump_tol";
        throw ConfigError(os.str());
    }

    op.left_tail = normal_cdf((op.z_lo - g) / d);
    op.right_tail = normal_cdf(-(op.z_hi - g) / d);
    const double window_mass = 1.0 - op.left_tail - op.right_tail;

    const int npts = op.m_hi - op.m_lo + 1;
    op.w.assign(npts, 0.0);
    if (npts == 1) {
        op.w[0] = window_mass;
        return op;
    }
    double sum = 0.0;
    for (int t = 0; t < npts; ++t) {
        double simp = (t == 0 || t == npts - 1) ? 1.0 : (t % 2 == 1 ? 4.0 : 2.0);
        op.w[t] = (h / 3.0) * simp * jump_density_z((op.m_lo + t) * h, params);
        sum += op.w[t];
    }
    // Rescale so weights reproduce the exact window mass: constants are then
    // convolved exactly and the total with tails is 1 to rounding.
    if (sum > 0.0) {
        const double scale = window_mass / sum;
        for (double& x : op.w) x *= scale;
    }
    return op;
}

namespace {

void apply_rows(const JumpOperator& op, const std::vector<double>& u,
                const Grid& grid, std::vector<double>& out, TailMode mode,
                int j_begin, int j_end, std::vector<double>& ext) {
    const int nx = grid.nx();
    const int npts = static_cast<int>(op.w.size());
    const double left_val = 1.0;
    const double right_val = mode == TailMode::OnesTest ? 1.0 : 0.0;
    const double tails = op.left_tail * left_val + op.right_tail * right_val;
    const int pad_l = std::max(0, -op.m_lo);
    const int pad_r = std::max(0, op.m_hi);
    ext.resize(pad_l + nx + pad_r);

    for (int j = j_begin; j < j_end; ++j) {
        const double* urow = u.data() + static_cast<std::size_t>(j) * nx;
        std::fill(ext.begin(), ext.begin() + pad_l, left_val);
        std::copy(urow, urow + nx, ext.begin() + pad_l);
        std::fill(ext.begin() + pad_l + nx, ext.end(), right_val);
        double* orow = out.data() + static_cast<std::size_t>(j) * nx;
        // u(x_i + m h) = ext[pad_l + i + m]; first offset is m_lo.
        const double* base = ext.data() + pad_l + op.m_lo;
        for (int i = 0; i < nx; ++i) {
            double s = 0.0;
            const double* e = base + i;
            for (int t = 0; t < npts; ++t) s += op.w[t] * e[t];
            orow[i] = op.lambda * (s + tails);
        }
    }
}

} // namespace

void apply_jump_into(const JumpOperator& op, const std::vector<double>& u,
                     const Grid& grid, std::vector<double>& out, TailMode mode,
                     int threads) {
    out.resize(u.size());
    const int ny = grid.ny();
    if (op.lambda == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    if (threads <= 1 || ny < 8) {
        std::vector<double> ext;
        apply_rows(op, u, grid, out, mode, 0, ny, ext);
        return;
    }
    const int nt = std::min(threads, ny);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        const int j0 = static_cast<int>(static_cast<long>(ny) * t / nt);
        const int j1 = static_cast<int>(static_cast<long>(ny) * (t + 1) / nt);
        pool.emplace_back([&, j0, j1]() {
            std::vector<double> ext;
            apply_rows(op, u, grid, out, mode, j0, j1, ext);
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<double> apply_jump(const JumpOperator& op,
                               const std::vector<double>& u, const Grid& grid,
                               TailMode mode, int threads) {
    std::vector<double> out;
    apply_jump_into(op, u, grid, out, mode, threads);
    return out;
}

} // namespace bates
