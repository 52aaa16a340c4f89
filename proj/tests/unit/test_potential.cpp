#include <doctest.h>

#include <cmath>

#include "phaselab/error.hpp"
#include "phaselab/potential.hpp"

using namespace phaselab;

TEST_CASE("polynomial degree and derivatives") {
    const auto V = PotentialSpec::polynomial({1.0, -2.0, 0.5, 0.0, 0.1});
    CHECK(V.degree() == 4);
    CHECK_FALSE(V.at_most_quadratic());
    const double q = 1.3;
    CHECK(V(q) == doctest::Approx(1 - 2 * q + 0.5 * q * q + 0.1 * std::pow(q, 4)));
    CHECK(V.derivative(q, 1) == doctest::Approx(-2 + q + 0.4 * q * q * q));
    CHECK(V.derivative(q, 2) == doctest::Approx(1 + 1.2 * q * q));
    CHECK(V.derivative(q, 3) == doctest::Approx(2.4 * q));
    CHECK(V.derivative(q, 4) == doctest::Approx(2.4));
    CHECK(PotentialSpec::harmonic(2.0, 3.0).coefficients()[2] == doctest::Approx(9.0));
    CHECK(PotentialSpec::free().degree() == 0);
    CHECK(PotentialSpec::linear(0.3).degree() == 1);
    CHECK(PotentialSpec::linear(0.3).at_most_quadratic());
}

TEST_CASE("tabulated potentials use periodic differences") {
    const Grid1D g(128, 0.0, 2 * M_PI, 128, 1.0);
    std::vector<double> t(128);
    for (std::size_t i = 0; i < 128; ++i) t[i] = std::sin(g.q(i));
    const auto V = PotentialSpec::tabulated(t);
    CHECK(V.degree() == PotentialSpec::kTabulated);
    const auto d = potential_derivative(V, g, 1);
    for (std::size_t i = 0; i < 128; i += 17) CHECK(d[i] == doctest::Approx(std::cos(g.q(i))).epsilon(1e-5));
    CHECK_THROWS_AS(evaluate_potential(PotentialSpec::tabulated({1, 2, 3}), g), ValidationError);
}
