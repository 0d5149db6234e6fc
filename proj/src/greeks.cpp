#include "bates/greeks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace bates {

const char* greek_name(GreekKind k) {
    switch (k) {
        case GreekKind::Price: return "price";
        case GreekKind::Vega: return "vega";
        case GreekKind::Gamma: return "gamma";
        case GreekKind::Delta: return "delta";
        case GreekKind::Theta: return "theta";
    }
    return "?";
}

double GreekSurface::value_at_node(int i_global, int j_global) const {
    const int i = i_global - off_x;
    const int j = j_global - off_y;
    if (i < 0 || i >= nx() || j < 0 || j >= ny())
        throw DomainError("GreekSurface: node trimmed off the surface");
    return value(i, j);
}

void fd_weights(double z, const double* nodes, int n_nodes, int m, double* w) {
    // Fornberg (1988). c[i][k]: weight of node i for the k-th derivative.
    double c[8][3] = {};
    double c1 = 1.0, c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n_nodes; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    for (int i = 0; i < n_nodes; ++i) w[i] = c[i][m];
}

namespace {

int stencil_half(SchemeKind scheme) {
    return scheme == SchemeKind::Hoc4 ? 2 : 1;
}

GreekSurface make_trimmed(GreekKind kind, SchemeKind scheme, const Grid& grid,
                          const ContractSpec& c, double tau, int trim_x,
                          int trim_y) {
    GreekSurface gs;
    gs.kind = kind;
    gs.scheme = scheme;
    gs.strike = c.strike;
    gs.tau = tau;
    gs.off_x = trim_x;
    gs.off_y = trim_y;
    if (grid.nx() <= 2 * trim_x || grid.ny() <= 2 * trim_y)
        throw ConfigError("greeks: grid too small for the stencil trim");
    gs.x.assign(grid.x.begin() + trim_x, grid.x.end() - trim_x);
    gs.y.assign(grid.y.begin() + trim_y, grid.y.end() - trim_y);
    gs.v.assign(static_cast<long>(gs.nx()) * gs.ny(), 0.0);
    return gs;
}

} // namespace

GreekSurface price_surface(const Surface& u, const Grid& grid,
                           const BatesParams& params, const ContractSpec& c,
                           SchemeKind scheme) {
    GreekSurface gs = make_trimmed(GreekKind::Price, scheme, grid, c, u.tau, 0, 0);
    const double scale = c.strike * discount_factor(u.tau, params);
    for (long i = 0; i < static_cast<long>(u.v.size()); ++i)
        gs.v[i] = scale * u.v[i];
    return gs;
}

GreekSurface vega_surface(const Surface& u, const Grid& grid,
                          const BatesParams& params, const ContractSpec& c,
                          SchemeKind scheme, bool paper_literal) {
    const int nx = grid.nx();
    if (paper_literal) {
        // Formula as printed: fourth-order difference in the i direction with
        // a 1/sigma_j prefactor, applied to the raw transformed solution.
        GreekSurface gs = make_trimmed(GreekKind::Vega, scheme, grid, c, u.tau, 2, 0);
        for (int j = 0; j < gs.ny(); ++j) {
            const double sig = params.sigma_v * gs.y[j];
            for (int i = 0; i < gs.nx(); ++i) {
                const int gi = i + gs.off_x;
                const double* row = u.v.data() + static_cast<long>(j) * nx;
                const double d = (row[gi - 2] - 8.0 * row[gi - 1] +
                                  8.0 * row[gi + 1] - row[gi + 2]) /
                                 (12.0 * grid.h);
                gs.v[static_cast<long>(j) * gs.nx() + i] = d / sig;
            }
        }
        return gs;
    }

    const int half = stencil_half(scheme);
    GreekSurface gs = make_trimmed(GreekKind::Vega, scheme, grid, c, u.tau, 0, half);
    // Vega = dV/dsigma = K e^{-(r+l)tau} u_y / sigma_v through y = sigma/sigma_v.
    const double scale = c.strike * discount_factor(u.tau, params) / params.sigma_v;
    for (int j = 0; j < gs.ny(); ++j) {
        const int gj = j + gs.off_y;
        for (int i = 0; i < gs.nx(); ++i) {
            auto at = [&](int dj) { return u.v[grid.idx(i, gj + dj)]; };
            double d;
            if (half == 2)
                d = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * grid.h);
            else
                d = (at(1) - at(-1)) / (2.0 * grid.h);
            gs.v[static_cast<long>(j) * gs.nx() + i] = scale * d;
        }
    }
    return gs;
}

namespace {

// Derivatives with respect to the physical spot, taken on the log-spaced
// nodes s_i = e^{x_i} with FD weights that are exact on polynomials in s.
// A put linear in S therefore has exactly zero gamma, which is the
// chain-rule cancellation (u_xx - u_x)/S^2 written without the cancellation
// error of two separate log-direction stencils.
GreekSurface spot_derivative_surface(GreekKind kind, int order,
                                     const Surface& u, const Grid& grid,
                                     const BatesParams& params,
                                     const ContractSpec& c, SchemeKind scheme) {
    const int half = stencil_half(scheme);
    const int npts = 2 * half + 1;
    GreekSurface gs = make_trimmed(kind, scheme, grid, c, u.tau, half, 0);
    const double disc = discount_factor(u.tau, params);
    // Per-unit-strike price derivative; gamma gets the extra 1/K.
    const double scale = kind == GreekKind::Gamma ? disc / c.strike : disc;

    const int nx = grid.nx();
    std::vector<double> s(nx);
    for (int i = 0; i < nx; ++i) s[i] = std::exp(grid.x[i]);

    std::vector<double> w(static_cast<std::size_t>(npts));
    for (int i = 0; i < gs.nx(); ++i) {
        const int gi = i + gs.off_x;
        fd_weights(s[gi], s.data() + gi - half, npts, order, w.data());
        for (int j = 0; j < gs.ny(); ++j) {
            const double* row = u.v.data() + static_cast<long>(j) * nx;
            double d = 0.0;
            for (int t = 0; t < npts; ++t) d += w[t] * row[gi - half + t];
            gs.v[static_cast<long>(j) * gs.nx() + i] = scale * d;
        }
    }
    return gs;
}

} // namespace

GreekSurface gamma_surface(const Surface& u, const Grid& grid,
                           const BatesParams& params, const ContractSpec& c,
                           SchemeKind scheme, bool paper_literal) {
    if (paper_literal) {
        // Printed prefactor 1/S_i^2 on the plain fourth-order second
        // difference of u (standard signs), no log-transform correction.
        GreekSurface gs = make_trimmed(GreekKind::Gamma, scheme, grid, c, u.tau, 2, 0);
        const int nx = grid.nx();
        for (int j = 0; j < gs.ny(); ++j)
            for (int i = 0; i < gs.nx(); ++i) {
                const int gi = i + gs.off_x;
                const double* row = u.v.data() + static_cast<long>(j) * nx;
                const double d2 = (-row[gi - 2] + 16.0 * row[gi - 1] -
                                   30.0 * row[gi] + 16.0 * row[gi + 1] -
                                   row[gi + 2]) /
                                  (12.0 * grid.h * grid.h);
                const double spot = c.strike * std::exp(gs.x[i]);
                gs.v[static_cast<long>(j) * gs.nx() + i] = d2 / (spot * spot);
            }
        return gs;
    }
    return spot_derivative_surface(GreekKind::Gamma, 2, u, grid, params, c, scheme);
}

GreekSurface delta_surface(const Surface& u, const Grid& grid,
                           const BatesParams& params, const ContractSpec& c,
                           SchemeKind scheme) {
    return spot_derivative_surface(GreekKind::Delta, 1, u, grid, params, c, scheme);
}

GreekSurface theta_surface(const SolveReport& rep, const Grid& grid,
                           const BatesParams& params, const ContractSpec& c) {
    if (rep.levels_retained < 3)
        throw ConfigError("theta: run did not retain three time levels");
    GreekSurface gs = make_trimmed(GreekKind::Theta, rep.scheme, grid, c,
                                   rep.u.tau, 0, 0);
    // Second-order backward difference of the discounted price in tau;
    // theta = dV/dt = -dV/dtau.
    const double s0 = c.strike * discount_factor(rep.u.tau, params);
    const double s1 = c.strike * discount_factor(rep.u_prev.tau, params);
    const double s2 = c.strike * discount_factor(rep.u_prev2.tau, params);
    const double inv2k = 1.0 / (2.0 * rep.k);
    for (long i = 0; i < static_cast<long>(gs.v.size()); ++i) {
        const double dVdtau = (3.0 * s0 * rep.u.v[i] - 4.0 * s1 * rep.u_prev.v[i] +
                               s2 * rep.u_prev2.v[i]) * inv2k;
        gs.v[i] = -dVdtau;
    }
    return gs;
}

namespace {

double lagrange_1d(const std::vector<double>& nodes, int i0, int npts, double z,
                   int which) {
    // Cardinal basis value l_which(z) over nodes[i0 .. i0+npts-1].
    double num = 1.0, den = 1.0;
    const double zk = nodes[i0 + which];
    for (int t = 0; t < npts; ++t) {
        if (t == which) continue;
        num *= z - nodes[i0 + t];
        den *= zk - nodes[i0 + t];
    }
    return num / den;
}

int clamp_box(const std::vector<double>& nodes, double z, int npts) {
    // First index of an npts-wide box around z, clamped into range.
    const int n = static_cast<int>(nodes.size());
    int hi = static_cast<int>(std::upper_bound(nodes.begin(), nodes.end(), z) -
                              nodes.begin());
    int i0 = hi - npts / 2 - 1;
    i0 = std::max(0, std::min(i0, n - npts));
    return i0;
}

} // namespace

double evaluate_at_xy(const GreekSurface& gs, double x, double y) {
    const double ex = 1e-12 * std::max(1.0, std::abs(gs.x.back()));
    const double ey = 1e-12 * std::max(1.0, std::abs(gs.y.back()));
    if (x < gs.x.front() - ex || x > gs.x.back() + ex) {
        std::ostringstream os;
        os << "evaluate_at: x = " << x << " outside [" << gs.x.front() << ", "
           << gs.x.back() << "] of the trimmed " << greek_name(gs.kind)
           << " surface";
        throw DomainError(os.str());
    }
    if (y < gs.y.front() - ey || y > gs.y.back() + ey) {
        std::ostringstream os;
        os << "evaluate_at: y = " << y << " outside [" << gs.y.front() << ", "
           << gs.y.back() << "] of the trimmed " << greek_name(gs.kind)
           << " surface";
        throw DomainError(os.str());
    }
    const int px = std::min(4, gs.nx());
    const int py = std::min(4, gs.ny());
    const int ix = clamp_box(gs.x, x, px);
    const int iy = clamp_box(gs.y, y, py);

    double wx[4], wy[4];
    for (int t = 0; t < px; ++t) wx[t] = lagrange_1d(gs.x, ix, px, x, t);
    for (int t = 0; t < py; ++t) wy[t] = lagrange_1d(gs.y, iy, py, y, t);

    double acc = 0.0;
    for (int q = 0; q < py; ++q) {
        double rowacc = 0.0;
        for (int p = 0; p < px; ++p) rowacc += wx[p] * gs.value(ix + p, iy + q);
        acc += wy[q] * rowacc;
    }
    return acc;
}

double evaluate_at(const GreekSurface& gs, double spot, double sigma,
                   const BatesParams& params) {
    return evaluate_at_xy(gs, std::log(spot / gs.strike), sigma / params.sigma_v);
}

void export_csv(const GreekSurface& gs, const BatesParams& params,
                std::ostream& os) {
    os << "S,sigma,value\n";
    char buf[128];
    for (int j = 0; j < gs.ny(); ++j)
        for (int i = 0; i < gs.nx(); ++i) {
            const double spot = gs.strike * std::exp(gs.x[i]);
            const double sigma = params.sigma_v * gs.y[j];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", spot, sigma,
                          gs.value(i, j));
            os << buf;
        }
}

} // namespace bates
