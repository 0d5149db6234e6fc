#include "bates/operators.hpp"

#include <cstdio>
#include <ostream>

namespace bates {

const char* scheme_name(SchemeKind s) {
    return s == SchemeKind::Hoc4 ? "hoc4" : "central2";
}

PdeCoeffs pde_coeffs(const BatesParams& params, double y) {
    const double v = params.sigma_v;
    PdeCoeffs c{};
    c.a = 0.5 * v * y;
    c.b = params.rho * v * y;
    c.c = -(0.5 * v * y - params.r + params.lambda * params.xi_b());
    c.d = params.kappa * (params.theta - v * y) / v;
    c.a1 = 0.5 * v;
    c.b1 = params.rho * v;
    c.c1 = -0.5 * v;
    c.d1 = -params.kappa;
    return c;
}

namespace {

// Primitive central-difference stencils, scaled by `s`.
void add_i(Stencil9& w, double s) { w.at(0, 0) += s; }

void add_dx(Stencil9& w, double s, double h) {
    w.at(1, 0) += s / (2 * h);
    w.at(-1, 0) -= s / (2 * h);
}

void add_dy(Stencil9& w, double s, double h) {
    w.at(0, 1) += s / (2 * h);
    w.at(0, -1) -= s / (2 * h);
}

void add_dxx(Stencil9& w, double s, double h) {
    const double c = s / (h * h);
    w.at(1, 0) += c;
    w.at(0, 0) -= 2 * c;
    w.at(-1, 0) += c;
}

void add_dyy(Stencil9& w, double s, double h) {
    const double c = s / (h * h);
    w.at(0, 1) += c;
    w.at(0, 0) -= 2 * c;
    w.at(0, -1) += c;
}

void add_dxy(Stencil9& w, double s, double h) {
    const double c = s / (4 * h * h);
    w.at(1, 1) += c;
    w.at(-1, -1) += c;
    w.at(1, -1) -= c;
    w.at(-1, 1) -= c;
}

void add_dxxy(Stencil9& w, double s, double h) {
    const double c = s / (2 * h * h * h);
    for (int dx : {-1, 0, 1}) {
        const double wx = dx == 0 ? -2.0 : 1.0;
        w.at(dx, 1) += c * wx;
        w.at(dx, -1) -= c * wx;
    }
}

void add_dxyy(Stencil9& w, double s, double h) {
    const double c = s / (2 * h * h * h);
    for (int dy : {-1, 0, 1}) {
        const double wy = dy == 0 ? -2.0 : 1.0;
        w.at(1, dy) += c * wy;
        w.at(-1, dy) -= c * wy;
    }
}

void add_dxxyy(Stencil9& w, double s, double h) {
    const double c = s / (h * h * h * h);
    for (int dx : {-1, 0, 1})
        for (int dy : {-1, 0, 1}) {
            const double wx = dx == 0 ? -2.0 : 1.0;
            const double wy = dy == 0 ? -2.0 : 1.0;
            w.at(dx, dy) += c * wx * wy;
        }
}

} // namespace

StencilPair scheme_stencils(SchemeKind scheme, const BatesParams& params,
                            double y, double h) {
    const PdeCoeffs p = pde_coeffs(params, y);
    StencilPair sp;

    add_dxx(sp.op, p.a, h);
    add_dyy(sp.op, p.a, h);
    add_dxy(sp.op, p.b, h);
    add_dx(sp.op, p.c, h);
    add_dy(sp.op, p.d, h);

    if (scheme == SchemeKind::Central2) {
        add_i(sp.mass, 1.0);
        return sp;
    }

    // Fourth-order compact corrections. The leading truncation error of the
    // second-order scheme is h^2 times a combination of third and fourth
    // derivatives; repeated differentiation of the PDE expresses that
    // combination through compact derivatives of u and of the right-hand
    // side f, giving a 9-point operator pair with A u = B f + O(h^4).
    const double A = p.a, B = p.b, C = p.c, D = p.d;
    const double A1 = p.a1, B1 = p.b1, C1 = p.c1, D1 = p.d1;
    const double h2 = h * h;

    const double kx = -C1 * (D - 2 * A1) / (12 * A);
    const double ky = -D1 * (D - 2 * A1) / (12 * A);
    const double kxx = (B * A1 * C) / (12 * A * A) - (B * C1) / (12 * A) -
                       C * C / (12 * A) - A1 * (D - 2 * A1) / (12 * A);
    const double kyy = -D1 / 6 - D * (D - 2 * A1) / (12 * A) -
                       A1 * (D - 2 * A1) / (12 * A);
    const double kxy = -C1 / 6 + (B * A1 * D) / (12 * A * A) -
                       (B * D1) / (12 * A) - (C * D) / (12 * A) -
                       (C + B1) * (D - 2 * A1) / (12 * A);
    const double kxxy = -D / 6 + (B * B * A1) / (12 * A * A) -
                        B * (B1 + 2 * C) / (12 * A);
    const double kxyy = -(B1 + C) / 6 + B * (A1 - D) / (6 * A);
    const double kxxyy = -A / 6 - B * B / (12 * A);
    const double px = C / (12 * A) - B * A1 / (12 * A * A);
    const double py = (D - 2 * A1) / (12 * A);

    add_dx(sp.op, -h2 * kx, h);
    add_dy(sp.op, -h2 * ky, h);
    add_dxx(sp.op, -h2 * kxx, h);
    add_dyy(sp.op, -h2 * kyy, h);
    add_dxy(sp.op, -h2 * kxy, h);
    add_dxxy(sp.op, -h2 * kxxy, h);
    add_dxyy(sp.op, -h2 * kxyy, h);
    add_dxxyy(sp.op, -h2 * kxxyy, h);

    add_i(sp.mass, 1.0);
    add_dxx(sp.mass, h2 / 12, h);
    add_dyy(sp.mass, h2 / 12, h);
    add_dxy(sp.mass, h2 * B / (12 * A), h);
    add_dx(sp.mass, h2 * px, h);
    add_dy(sp.mass, h2 * py, h);

    return sp;
}

OperatorPair assemble_generator(SchemeKind scheme, const BatesParams& params,
                                const Grid& grid) {
    const int nx = grid.nx();
    const int ny = grid.ny();
    const int n = grid.n_nodes();
    SparseBuilder gen(n), mass(n);

    for (int j = 1; j < ny - 1; ++j) {
        const StencilPair sp = scheme_stencils(scheme, params, grid.y[j], grid.h);
        for (int i = 1; i < nx - 1; ++i) {
            const int row = grid.idx(i, j);
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const double wo = sp.op.at(dx, dy);
                    const double wm = sp.mass.at(dx, dy);
                    const int cc = grid.idx(i + dx, j + dy);
                    if (wo != 0.0) gen.add(row, cc, wo);
                    if (wm != 0.0) mass.add(row, cc, wm);
                }
        }
    }
    return {gen.finish(nx), mass.finish(nx)};
}

std::vector<double> neumann_weights(SchemeKind scheme, double h) {
    if (scheme == SchemeKind::Central2)
        return {-1.5 / h, 2.0 / h, -0.5 / h};
    return {-25.0 / (12.0 * h), 4.0 / h, -3.0 / h, 4.0 / (3.0 * h),
            -0.25 / h};
}

OperatorMatrices assemble(SchemeKind scheme, const BatesParams& params,
                          const Grid& grid) {
    params.validate();
    if (grid.L2 <= 0.0)
        throw ConfigError("operator: y = 0 is degenerate; require L2 > 0");
    const std::vector<double> nw = neumann_weights(scheme, grid.h);
    if (grid.ny() < static_cast<int>(nw.size()) + 1)
        throw ConfigError("operator: grid too small in y for the Neumann stencil");

    const OperatorPair op = assemble_generator(scheme, params, grid);
    const int nx = grid.nx();
    const int ny = grid.ny();
    const int n = grid.n_nodes();
    const double half_k = 0.5 * grid.k;

    OperatorMatrices out;
    out.scheme = scheme;
    out.k = grid.k;
    out.is_dirichlet.assign(n, 0);
    out.is_constraint.assign(n, 0);
    out.constraint_rhs.assign(n, 0.0);

    SparseBuilder impl(n), expl(n), mrhs(n);
    for (int r = 0; r < n; ++r) {
        const int i = r % nx;
        const int j = r / nx;
        if (i == 0 || i == nx - 1) {
            out.is_dirichlet[r] = 1;
            out.is_constraint[r] = 1;
            out.constraint_rhs[r] = i == 0 ? 1.0 : 0.0;
            impl.add(r, r, 1.0);
            continue;
        }
        if (j == 0 || j == ny - 1) {
            // One-sided u_y = 0, pointing into the domain.
            out.is_constraint[r] = 1;
            const int dir = j == 0 ? 1 : -1;
            for (std::size_t t = 0; t < nw.size(); ++t)
                impl.add(r, grid.idx(i, j + dir * static_cast<int>(t)), nw[t]);
            continue;
        }
        for (int k = op.mass.row_ptr[r]; k < op.mass.row_ptr[r + 1]; ++k) {
            impl.add(r, op.mass.col[k], op.mass.val[k]);
            expl.add(r, op.mass.col[k], op.mass.val[k]);
            mrhs.add(r, op.mass.col[k], op.mass.val[k]);
        }
        for (int k = op.gen.row_ptr[r]; k < op.gen.row_ptr[r + 1]; ++k) {
            impl.add(r, op.gen.col[k], -half_k * op.gen.val[k]);
            expl.add(r, op.gen.col[k], half_k * op.gen.val[k]);
        }
    }
    out.a_impl = impl.finish(nx);
    out.a_expl = expl.finish(nx);
    out.mass_rhs = mrhs.finish(nx);
    return out;
}

void dump_coo(const SparseMatrix& m, std::ostream& os) {
    char buf[80];
    for (int r = 0; r < m.n; ++r)
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r, m.col[k], m.val[k]);
            os << buf;
        }
}

} // namespace bates
