#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bsr/geometry.hpp"

using namespace bsr;

TEST_CASE("interval geometry: nodes, weights, boundary wiring") {
    const Geometry g = build_interval(8);
    CHECK(g.kind == GeomKind::Interval);
    CHECK(g.num_bulk() == 8);
    CHECK(g.num_surf() == 2);
    for (int i = 0; i < 8; ++i) {
        CHECK(g.bulk_x[i] == doctest::Approx((i + 0.5) / 8.0).epsilon(1e-15));
        CHECK(g.bulk_w[i] == doctest::Approx(0.125).epsilon(1e-15));
    }
    CHECK(g.domain_measure() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.surface_measure() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.boundary_cell[0] == 0);
    CHECK(g.boundary_cell[1] == 7);
    CHECK(g.face_measure[0] == g.surf_w[0]);
    CHECK(g.face_measure[1] == g.surf_w[1]);
}

TEST_CASE("interval geometry: rejects too few cells") {
    CHECK_THROWS_AS(build_interval(2), std::invalid_argument);
}

TEST_CASE("disk geometry: midpoint quadrature is exact for the measures") {
    const Geometry g = build_disk(12, 16);
    CHECK(g.num_bulk() == 12 * 16);
    CHECK(g.num_surf() == 16);
    // sum r_i dr dth over cells telescopes to pi exactly
    CHECK(g.domain_measure() == doctest::Approx(M_PI).epsilon(1e-13));
    CHECK(g.surface_measure() == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
    for (int s = 0; s < g.num_surf(); ++s) {
        CHECK(g.face_measure[s] == g.surf_w[s]);
        CHECK(g.boundary_cell[s] == (12 - 1) * 16 + s);
        const double r = std::hypot(g.surf_x[s], g.surf_y[s]);
        CHECK(r == doctest::Approx(1.0).epsilon(1e-14));
    }
    // outermost cell centers sit at radius 1 - dr/2
    const int c = g.boundary_cell[0];
    CHECK(std::hypot(g.bulk_x[c], g.bulk_y[c]) ==
          doctest::Approx(1.0 - 0.5 / 12.0).epsilon(1e-13));
}

TEST_CASE("disk geometry: argument validation") {
    CHECK_THROWS_AS(build_disk(2, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_disk(8, 6), std::invalid_argument);
    CHECK_THROWS_AS(build_disk(8, 9), std::invalid_argument);
}
