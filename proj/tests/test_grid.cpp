#include "doctest.h"

#include <cmath>

#include "bates/grid.hpp"

using namespace bates;

TEST_CASE("node counts and coordinates") {
    GridSpec spec;
    spec.R1 = 4.0;
    spec.L2 = 0.1;
    spec.R2 = 4.1;
    spec.h = 0.4;
    const Grid g = build_grid(spec);
    CHECK(g.N == 10);
    CHECK(g.M == 10);
    CHECK(g.nx() == 21);
    CHECK(g.ny() == 11);
    CHECK(g.x.front() == doctest::Approx(-4.0));
    CHECK(g.x.back() == doctest::Approx(4.0));
    CHECK(g.x[g.N] == doctest::Approx(0.0));
    CHECK(g.y.front() == doctest::Approx(0.1));
    CHECK(g.y.back() == doctest::Approx(4.1));
}

TEST_CASE("time step hits the horizon exactly from below") {
    GridSpec spec;
    spec.h = 0.1;
    spec.mesh_ratio = 0.4;
    spec.expiry = 0.5;
    const Grid g = build_grid(spec);
    CHECK(g.n_steps == 125);
    CHECK(g.k == doctest::Approx(0.004).epsilon(1e-15));
    CHECK(g.n_steps * g.k == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.k <= spec.mesh_ratio * spec.h * spec.h + 1e-15);

    // Mesh ratio held within the horizon-rounding slack for the paper sizes.
    for (double h : {0.4, 0.2, 0.1, 0.05, 0.025}) {
        const Grid gh = build_grid(spec.with_h(h));
        const double c = gh.k / (h * h);
        CHECK(std::abs(c - spec.mesh_ratio) <=
              spec.mesh_ratio * gh.k / spec.expiry + 1e-12);
        CHECK(gh.n_steps * gh.k == doctest::Approx(spec.expiry).epsilon(1e-12));
    }
}

TEST_CASE("non-divisible bounds are rejected with the bound name") {
    GridSpec spec;
    spec.h = 0.3;
    CHECK_THROWS_WITH_AS(build_grid(spec), doctest::Contains("R1"), ConfigError);
    spec.h = 0.4;
    spec.R2 = 4.0;   // (R2-L2)/h = 9.75
    CHECK_THROWS_WITH_AS(build_grid(spec), doctest::Contains("R2"), ConfigError);
}

TEST_CASE("common nodes of nested grids") {
    GridSpec spec;
    const Grid fine = build_grid(spec.with_h(0.025));
    CHECK(common_nodes(build_grid(spec.with_h(0.4)), fine).stride == 16);
    CHECK(common_nodes(build_grid(spec.with_h(0.05)), fine).stride == 2);
    for (double h : {0.4, 0.2, 0.1, 0.05})
        CHECK_NOTHROW(common_nodes(build_grid(spec.with_h(h)), fine));

    // Coinciding coordinates, not just counts.
    const Grid coarse = build_grid(spec.with_h(0.2));
    const NodeMap nm = common_nodes(coarse, fine);
    for (int i = 0; i < coarse.nx(); ++i)
        CHECK(coarse.x[i] == doctest::Approx(fine.x[i * nm.stride]).epsilon(1e-14));
    for (int j = 0; j < coarse.ny(); ++j)
        CHECK(coarse.y[j] == doctest::Approx(fine.y[j * nm.stride]).epsilon(1e-14));
}

TEST_CASE("non-nested grids are rejected") {
    // Same domain, non-integer step ratio 0.35 / 0.1.
    GridSpec spec;
    spec.R1 = 4.2;
    spec.L2 = 0.1;
    spec.R2 = 4.3;
    const Grid coarse = build_grid(spec.with_h(0.35));
    const Grid fine = build_grid(spec.with_h(0.1));
    CHECK_THROWS_AS(common_nodes(coarse, fine), ConfigError);

    // Different domains are rejected too.
    GridSpec other = spec;
    other.R1 = 3.5;
    CHECK_THROWS_AS(common_nodes(build_grid(other.with_h(0.35)), fine),
                    ConfigError);
}
