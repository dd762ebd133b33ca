#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "emfrac/field_io.hpp"
#include "emfrac/grid.hpp"

using namespace emfrac;

TEST_CASE("build_grid basics") {
    const Grid2 g = build_grid(5, 5, 1.0, 1.0);
    CHECK(g.node_count() == 25);
    CHECK(g.h == doctest::Approx(0.25).epsilon(1e-15));

    const Grid2 g2 = build_grid(3, 3, 2.0, 2.0);
    CHECK(g2.h == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(build_grid(5, 3, 1.0, 1.0), NonSquareCells);
    CHECK_THROWS_AS(build_grid(2, 5, 1.0, 1.0), TooSmall);
    CHECK_THROWS_AS(build_grid(5, 2, 1.0, 1.0), TooSmall);
    CHECK_THROWS_AS(build_grid(5, 5, -1.0, -1.0), ValidationError);
}

TEST_CASE("boundary partition counts and corner tie-break") {
    const Grid2 g = build_grid(5, 5, 1.0, 1.0);

    SUBCASE("strip labels") {
        EdgeSpec spec{Label::GammaU1, Label::GammaU2, Label::GammaF, Label::GammaF};
        const BoundaryPartition p = partition_boundary(g, spec);
        CHECK(p.count_u1 == 5);
        CHECK(p.count_u2 == 5);
        CHECK(p.count_f == 6);
        CHECK(p.boundary_count() == 16);
        // corners adjacent to Dirichlet edges take the Dirichlet label
        CHECK(p.at(g.node_id(0, 0)) == Label::GammaU1);
        CHECK(p.at(g.node_id(4, 4)) == Label::GammaU2);
    }

    SUBCASE("all free") {
        EdgeSpec spec{Label::GammaF, Label::GammaF, Label::GammaF, Label::GammaF};
        const BoundaryPartition p = partition_boundary(g, spec);
        CHECK(p.count_f == 16);
        CHECK(p.count_u1 == 0);
    }

    SUBCASE("missing edge") {
        EdgeSpec spec{Label::GammaU1, Label::GammaU2, Label::GammaF, Label::Interior};
        CHECK_THROWS_AS(partition_boundary(g, spec), UnlabeledEdge);
    }

    SUBCASE("u1 beats u2 at shared corners") {
        EdgeSpec spec{Label::GammaU1, Label::GammaF, Label::GammaU2, Label::GammaU2};
        const BoundaryPartition p = partition_boundary(g, spec);
        CHECK(p.at(g.node_id(0, 0)) == Label::GammaU1);
        CHECK(p.at(g.node_id(4, 0)) == Label::GammaU1);
    }
}

TEST_CASE("boundary node count matches partition size") {
    for (int nx : {3, 5, 9}) {
        const Grid2 g = build_grid(nx, nx, 1.0, 1.0);
        EdgeSpec spec{Label::GammaU1, Label::GammaU2, Label::GammaF, Label::GammaF};
        const BoundaryPartition p = partition_boundary(g, spec);
        int expected = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.is_boundary(i, j)) ++expected;
        CHECK(p.boundary_count() == expected);
    }
}

TEST_CASE("field constructors reject bad values") {
    const Grid2 g = build_grid(3, 3, 1.0, 1.0);
    std::vector<double> vals(9, 0.0);
    vals[4] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ScalarField(g, vals), NonFiniteValue);

    vals[4] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(ScalarField(g, vals), NonFiniteValue);

    std::vector<double> dv(9, 0.5);
    dv[2] = 1.5;
    CHECK_THROWS_AS(DamageField(g, dv), OutOfRange);
    const DamageField clamped(g, dv, RangePolicy::Clamp);
    CHECK(clamped(2, 0) == 1.0);

    dv[2] = -0.25;
    CHECK_THROWS_AS(DamageField(g, dv, RangePolicy::Reject), OutOfRange);
    const DamageField clamped2(g, dv, RangePolicy::Clamp);
    CHECK(clamped2(2, 0) == 0.0);
}

TEST_CASE("cell gradient is exact for linear fields") {
    const Grid2 g = build_grid(7, 7, 2.0, 2.0);
    ScalarField u(g, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u(i, j) = 3.0 * g.x(i) - 2.0 * g.y(j) + 0.5;
    const CellVectorField grad = cell_gradient(u);
    for (int c = 0; c < g.cell_count(); ++c) {
        CHECK(grad.x[c] == doctest::Approx(3.0).epsilon(1e-13));
        CHECK(grad.y[c] == doctest::Approx(-2.0).epsilon(1e-13));
    }
}

TEST_CASE("field CSV round trip is exact") {
    const Grid2 g = build_grid(4, 4, 1.5, 1.5);
    ScalarField u(g, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u(i, j) = std::sin(1.0 + i) * std::cos(2.0 + j) / 3.0;

    std::stringstream ss;
    write_field_csv(ss, u);
    const ScalarField back = read_field_csv(ss);
    REQUIRE(back.grid().nx == g.nx);
    REQUIRE(back.grid().ny == g.ny);
    CHECK(back.grid().h == doctest::Approx(g.h).epsilon(1e-16));
    for (int n = 0; n < g.node_count(); ++n) CHECK(back[n] == u[n]);
}
