#include <doctest.h>

#include <cmath>

#include "phaselab/error.hpp"
#include "phaselab/grid.hpp"

using namespace phaselab;

TEST_CASE("half shifts land on nodes") {
    const Grid1D g(64, -8.0, 8.0, 32, 0.7);
    CHECK(g.dq() == doctest::Approx(0.25));
    CHECK(0.5 * g.sigma() * g.dk() == doctest::Approx(g.dq()).epsilon(1e-14));
    CHECK(g.dp() * g.dk() * g.n_p() == doctest::Approx(2.0 * M_PI));
    CHECK(g.p(g.n_p() / 2) == 0.0);
    CHECK(g.k(g.n_p() / 2) == 0.0);
    CHECK(g.shift(0) == -16);
}

TEST_CASE("momentum span is fixed by dq and sigma") {
    const Grid1D a(128, -10.0, 10.0, 64, 1.0), b(128, -10.0, 10.0, 256, 1.0);
    CHECK(a.dp() * a.n_p() == doctest::Approx(b.dp() * b.n_p()));
    CHECK(a.dp() * a.n_p() == doctest::Approx(M_PI / a.dq()));
}

TEST_CASE("wigner window avoids double counting through the wrap") {
    CHECK(Grid1D(64, -1, 1, 64, 1).wigner_window() == 16);
    CHECK(Grid1D(64, -1, 1, 16, 1).wigner_window() == 8);
    CHECK(Grid1D(4, -1, 1, 2, 1).wigner_window() == 1);
}

TEST_CASE("power-of-two sizes are enforced") {
    CHECK_THROWS_AS(Grid1D(100, -1, 1, 64, 1), ValidationError);
    CHECK_THROWS_AS(Grid1D(64, -1, 1, 48, 1), ValidationError);
    CHECK_THROWS_AS(Grid1D(64, 1, -1, 64, 1), ValidationError);
    CHECK_THROWS_AS(Grid1D(64, -1, 1, 64, 0.0), ValidationError);
    try {
        Grid1D(100, -1, 1, 64, 1);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("power of two") != std::string::npos);
    }
    CHECK(is_power_of_two(1024));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(96));
}

TEST_CASE("node lookup and minimum-image differences") {
    const Grid1D g(16, 0.0, 16.0, 16, 1.0);
    const auto [i, d] = g.nearest_q(3.2);
    CHECK(i == 3);
    CHECK(d == doctest::Approx(0.2));
    CHECK(g.nearest_q(15.9).first == 0);  // wraps
    CHECK(g.q_difference(1, 15) == doctest::Approx(2.0));
    CHECK(g.q_difference(15, 1) == doctest::Approx(-2.0));
    CHECK(g.q_difference(0, 8) == doctest::Approx(-8.0));
}

TEST_CASE("construct_grid defaults to square grids") {
    const auto g = construct_grid(32, {-4.0, 4.0}, 1.0);
    CHECK(g.n_p() == 32);
    CHECK(g.compatible(Grid1D(32, -4.0, 4.0, 32, 1.0)));
    CHECK_FALSE(g.compatible(Grid1D(32, -4.0, 4.0, 16, 1.0)));
}
