#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bates/greeks.hpp"
#include "bates/grid.hpp"
#include "bates/model.hpp"
#include "bates/stepper.hpp"

using namespace bates;

namespace {

Grid default_grid(double h) {
    GridSpec spec;
    return build_grid(spec.with_h(h));
}

Surface synthetic(const Grid& g, double tau, double (*f)(double, double)) {
    Surface s;
    s.tau = tau;
    s.v.resize(g.n_nodes());
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) s.v[g.idx(i, j)] = f(g.x[i], g.y[j]);
    return s;
}

} // namespace

TEST_CASE("fd_weights: exact derivatives of polynomials on uneven nodes") {
    const double nodes[5] = {-1.3, -0.4, 0.1, 0.9, 2.0};
    double w[5];
    auto eval = [&](int m, double expect) {
        fd_weights(0.1, nodes, 5, m, w);
        double acc = 0.0;
        for (int t = 0; t < 5; ++t) acc += w[t] * nodes[t] * nodes[t] * nodes[t];
        CHECK(acc == doctest::Approx(expect).epsilon(1e-12));
    };
    eval(1, 0.03);   // d/dz z^3 at 0.1
    eval(2, 0.6);    // d2/dz2 z^3 at 0.1
}

TEST_CASE("vega of the payoff surface is identically zero") {
    const Grid g = default_grid(0.2);
    BatesParams p;
    ContractSpec c;
    const Surface pay = payoff_surface(g);
    for (SchemeKind s : {SchemeKind::Central2, SchemeKind::Hoc4}) {
        const GreekSurface vs = vega_surface(pay, g, p, c, s);
        for (double v : vs.v) CHECK(v == 0.0);
    }
}

TEST_CASE("vega scaling on linear and quartic test surfaces") {
    const Grid g = default_grid(0.2);
    BatesParams p;
    ContractSpec c;
    const double tau = 0.5;

    Surface lin = synthetic(g, tau, [](double, double y) { return y; });
    const GreekSurface vs = vega_surface(lin, g, p, c, SchemeKind::Hoc4);
    const double expect = c.strike * discount_factor(tau, p) / p.sigma_v;
    for (double v : vs.v) CHECK(v == doctest::Approx(expect).epsilon(1e-12));

    // Fourth-order stencil differentiates y^4 exactly; the second-order one
    // errs by its leading Taylor term h^2 (y^4)''' / 6 = 4 y h^2.
    Surface quart = synthetic(g, tau, [](double, double y) { return y * y * y * y; });
    const GreekSurface v4 = vega_surface(quart, g, p, c, SchemeKind::Hoc4);
    const GreekSurface v2 = vega_surface(quart, g, p, c, SchemeKind::Central2);
    const double scale = expect;
    for (int j = 0; j < v4.ny(); ++j) {
        const double y = v4.y[j];
        for (int i = 0; i < v4.nx(); ++i)
            CHECK(v4.value(i, j) ==
                  doctest::Approx(scale * 4.0 * y * y * y).epsilon(1e-11));
    }
    for (int j = 0; j < v2.ny(); ++j) {
        const double y = v2.y[j];
        const double taylor = scale * 4.0 * y * g.h * g.h;
        for (int i = 0; i < v2.nx(); ++i) {
            const double err = v2.value(i, j) - scale * 4.0 * y * y * y;
            CHECK(err == doctest::Approx(taylor).epsilon(1e-9));
        }
    }
}

TEST_CASE("gamma annihilates surfaces linear in the spot") {
    const Grid g = default_grid(0.1);
    BatesParams p;
    ContractSpec c;
    // u = a + b e^x means the per-unit price is affine in S.
    Surface s = synthetic(g, 0.5, [](double x, double) {
        return 0.7 + 0.25 * std::exp(x);
    });
    for (SchemeKind k : {SchemeKind::Central2, SchemeKind::Hoc4}) {
        const GreekSurface gs = gamma_surface(s, g, p, c, k);
        double worst = 0.0;
        for (double v : gs.v) worst = std::max(worst, std::abs(v));
        CHECK(worst <= 1e-10 * (0.7 + 0.25));
    }
    Surface flat = synthetic(g, 0.5, [](double, double) { return 0.37; });
    const GreekSurface gs = gamma_surface(flat, g, p, c, SchemeKind::Hoc4);
    for (double v : gs.v) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("delta of the payoff: -1 deep in the money, 0 out of the money") {
    const Grid g = default_grid(0.1);
    BatesParams p;
    ContractSpec c;
    const Surface pay = payoff_surface(g);
    const GreekSurface ds = delta_surface(pay, g, p, c, SchemeKind::Hoc4);
    // tau = 0, payoff 1 - S/K on the in-the-money branch: slope exactly -1.
    CHECK(ds.value_at_node(5, 3) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(evaluate_at(ds, 30.0, 0.09, p) == doctest::Approx(-1.0).epsilon(2e-2));
    CHECK(std::abs(evaluate_at(ds, 400.0, 0.09, p)) < 1e-10);
}

TEST_CASE("delta of a solved surface is monotone from -1 to 0") {
    const Grid g = default_grid(0.2);
    BatesParams p;
    ContractSpec c;
    const SolveReport rep = solve_pide(p, c, g, SchemeKind::Hoc4);
    const GreekSurface ds = delta_surface(rep.u, g, p, c, SchemeKind::Hoc4);
    const int j = 4;
    double prev = -1.1;
    for (int i = 0; i < ds.nx(); ++i) {
        const double d = ds.value(i, j);
        CHECK(d >= -1.0 - 1e-2);
        CHECK(d <= 1e-3);
        if (ds.x[i] >= -3.0) {
            CHECK(d >= prev - 1e-6);
            prev = d;
        }
    }
}

TEST_CASE("theta equals the discount derivative when u is frozen") {
    const Grid g = default_grid(0.2);
    BatesParams p;
    ContractSpec c;
    SolveReport rep;
    rep.scheme = SchemeKind::Hoc4;
    rep.k = g.k;
    rep.n_steps = g.n_steps;
    rep.levels_retained = 3;
    rep.u = synthetic(g, 0.5, [](double x, double) { return std::exp(-x * x); });
    rep.u_prev = rep.u;
    rep.u_prev2 = rep.u;
    rep.u.tau = 0.5;
    rep.u_prev.tau = 0.5 - g.k;
    rep.u_prev2.tau = 0.5 - 2 * g.k;

    const GreekSurface ts = theta_surface(rep, g, p, c);
    // With u frozen, V(tau) = K e^{-(r+l) tau} u and theta = (r+l) V up to
    // the O(k^2) truncation of the backward difference of the exponential.
    const double rl = p.r + p.lambda;
    const double tol = rl * rl * rl * g.k * g.k * c.strike;
    for (int j = 0; j < ts.ny(); ++j)
        for (int i = 0; i < ts.nx(); ++i) {
            const double v = c.strike * discount_factor(0.5, p) *
                             rep.u.v[g.idx(i, j)];
            CHECK(std::abs(ts.value(i, j) - rl * v) <= tol + 1e-12);
        }
}

TEST_CASE("theta of a flat worthless region is zero") {
    GridSpec spec;
    spec.h = 0.2;
    BatesParams p;
    p.r = 0.0;
    p.lambda = 0.0;
    ContractSpec c;
    const Grid g = build_grid(spec);
    const SolveReport rep = solve_pide(p, c, g, SchemeKind::Hoc4);
    const GreekSurface ts = theta_surface(rep, g, p, c);
    CHECK(std::abs(evaluate_at(ts, 100.0 * std::exp(3.5), 0.09, p)) < 1e-6);
}

TEST_CASE("theta requires three retained levels") {
    const Grid g = default_grid(0.2);
    BatesParams p;
    ContractSpec c;
    SolveReport rep;
    rep.levels_retained = 2;
    CHECK_THROWS_AS(theta_surface(rep, g, p, c), ConfigError);
}

TEST_CASE("evaluate_at: cardinal exactness on nodes, quartic order between") {
    const Grid g = default_grid(0.1);
    BatesParams p;
    ContractSpec c;

    Surface s = synthetic(g, 0.0, [](double x, double y) {
        return std::sin(x) * std::cos(y);
    });
    GreekSurface gs = price_surface(s, g, p, c, SchemeKind::Hoc4);

    // Nodal queries reproduce stored values bit for bit.
    for (int j : {0, 7, g.M})
        for (int i : {0, 13, 2 * g.N})
            CHECK(evaluate_at_xy(gs, gs.x[i], gs.y[j]) == gs.value(i, j));

    // Linear surfaces are interpolated exactly anywhere.
    Surface lin = synthetic(g, 0.0, [](double x, double y) {
        return 2.0 * x - 3.0 * y + 0.5;
    });
    GreekSurface gl = price_surface(lin, g, p, c, SchemeKind::Hoc4);
    CHECK(evaluate_at_xy(gl, 0.123456, 1.654321) ==
          doctest::Approx(c.strike * (2.0 * 0.123456 - 3.0 * 1.654321 + 0.5))
              .epsilon(1e-13));

    // Smooth surfaces: interpolation error shrinks like h^4.
    double prev = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
        const Grid gh = default_grid(h);
        Surface sh = synthetic(gh, 0.0, [](double x, double y) {
            return std::sin(x) * std::cos(y);
        });
        GreekSurface gsh = price_surface(sh, gh, p, c, SchemeKind::Hoc4);
        double worst = 0.0;
        for (double xq : {-0.93, 0.11, 1.77})
            for (double yq : {0.63, 2.11, 3.49}) {
                const double got = evaluate_at_xy(gsh, xq, yq) / c.strike;
                worst = std::max(worst, std::abs(got - std::sin(xq) * std::cos(yq)));
            }
        if (prev > 0.0) CHECK(prev / worst > 10.0);
        prev = worst;
    }
}

TEST_CASE("evaluate_at rejects points outside the trimmed domain") {
    const Grid g = default_grid(0.4);
    BatesParams p;
    ContractSpec c;
    Surface s = payoff_surface(g);
    const GreekSurface vs = vega_surface(s, g, p, c, SchemeKind::Hoc4);
    // Vega trims two y-nodes: y range is [0.9, 3.3].
    CHECK_THROWS_WITH_AS(evaluate_at(vs, 100.0, 0.05, p), doctest::Contains("y ="),
                         DomainError);
    CHECK_THROWS_AS(evaluate_at(vs, 1e5, 0.09, p), DomainError);
    CHECK_NOTHROW(evaluate_at(vs, 100.0, 0.09, p));
}

TEST_CASE("paper-literal modes differ from the chain-rule greeks") {
    const Grid g = default_grid(0.1);
    BatesParams p;
    ContractSpec c;
    const SolveReport rep = solve_pide(p, c, g, SchemeKind::Hoc4);
    const GreekSurface v = vega_surface(rep.u, g, p, c, SchemeKind::Hoc4, false);
    const GreekSurface vl = vega_surface(rep.u, g, p, c, SchemeKind::Hoc4, true);
    CHECK(v.off_y == 2);
    CHECK(vl.off_x == 2);   // printed formula differences the i direction
    CHECK(vl.off_y == 0);

    const GreekSurface gm = gamma_surface(rep.u, g, p, c, SchemeKind::Hoc4, false);
    const GreekSurface gml = gamma_surface(rep.u, g, p, c, SchemeKind::Hoc4, true);
    const double a = evaluate_at(gm, 100.0, 0.09, p);
    const double b = evaluate_at(gml, 100.0, 0.09, p);
    CHECK(a != b);
    CHECK(std::isfinite(b));
}

TEST_CASE("csv export shape") {
    const Grid g = default_grid(0.4);
    BatesParams p;
    ContractSpec c;
    Surface s = payoff_surface(g);
    const GreekSurface ps = price_surface(s, g, p, c, SchemeKind::Hoc4);
    std::ostringstream os;
    export_csv(ps, p, os);
    const std::string text = os.str();
    CHECK(text.substr(0, 14) == "S,sigma,value\n");
    const long rows = std::count(text.begin(), text.end(), '\n');
    CHECK(rows == 1 + ps.nx() * ps.ny());
}
