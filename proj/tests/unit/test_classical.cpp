#include <doctest.h>

#include <cmath>

#include "phaselab/classical.hpp"
#include "phaselab/error.hpp"
#include "phaselab/transforms.hpp"

using namespace phaselab;

namespace {

PhaseField blob(const Grid1D& g, double X, double Y, double a, double b) {
    PhaseField f(g, true);
    for (std::size_t i = 0; i < g.n_q(); ++i)
        for (std::size_t l = 0; l < g.n_p(); ++l)
            f.at(i, l) = std::exp(-std::pow(g.q(i) - X, 2) / a - std::pow(g.p(l) - Y, 2) / b) / (M_PI * std::sqrt(a * b));
    return f;
}

}  // namespace

TEST_CASE("harmonic trajectory") {
    const Units u{1.0, 2.0, 1.0};
    const auto s = TrajectoryState{1.0, 0.5}.evolved(1.5, 0.7, u);
    CHECK(s.X == doctest::Approx(std::cos(1.05) + 0.5 / 3.0 * std::sin(1.05)));
    CHECK(s.Y == doctest::Approx(0.5 * std::cos(1.05) - 3.0 * std::sin(1.05)));
}

TEST_CASE("free streaming is an exact shear") {
    const Grid1D g(128, -16, 16, 64, 1.0);
    const Units u{1.0, 2.0, 1.0};
    LiouvilleSolver L(g, PotentialSpec::free(), u);
    auto f = blob(g, -2.0, 0.4, 1.0, 0.3);
    L.advance(f, 0.05, 100);
    PhaseField ref(g);
    for (std::size_t i = 0; i < g.n_q(); ++i)
        for (std::size_t l = 0; l < g.n_p(); ++l) {
            const double q0 = g.q(i) - g.p(l) * 5.0 / u.mass;
            ref.at(i, l) = std::exp(-std::pow(q0 + 2.0, 2) - std::pow(g.p(l) - 0.4, 2) / 0.3) / (M_PI * std::sqrt(0.3));
        }
    CHECK(f.relative_l2(ref) < 1e-11);
}

TEST_CASE("uniform force follows the exact parabola") {
    const Grid1D g(128, -16, 16, 64, 1.0);
    const double F = 0.3, t = 2.0;
    LiouvilleSolver L(g, PotentialSpec::linear(F), {});
    auto f = blob(g, 0.0, 0.5, 1.0, 0.5);
    L.advance(f, 0.01, 200);
    const auto m = moments(f, PotentialSpec::linear(F));
    CHECK(m.mean_p == doctest::Approx(0.5 - F * t).epsilon(1e-11));
    CHECK(m.mean_q == doctest::Approx(0.5 * t - 0.5 * F * t * t).epsilon(1e-11));
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(liouville_step(f, PotentialSpec::linear(F), t), StepRejected);
}

TEST_CASE("harmonic flow carries the coherent Gaussian with second-order error") {
    const Grid1D g(128, -12, 12, 64, 1.0);
    const auto V = PotentialSpec::harmonic(1, 1);
    const auto P = GaussianCoherentParams::for_oscillator(1.0, 2.0, 0.0, {});
    LiouvilleSolver L(g, V, {});
    double err[2];
    for (int r = 0; r < 2; ++r) {
        const double dt = 0.02 / (1 << r);
        auto f = gaussian_coherent_state(P, 0.0, g);
        L.advance(f, dt, static_cast<std::size_t>(std::lround(1.0 / dt)));
        err[r] = f.relative_l2(gaussian_coherent_state(P, 1.0, g));
    }
    CHECK(err[0] < 1e-3);
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.02));
    const auto m = moments(gaussian_coherent_state(P, 0.0, g), V);
    CHECK(m.mean_H == doctest::Approx(2.0 + 0.5).epsilon(1e-12));
}

TEST_CASE("CFL guard suggests a step that passes") {
    const Grid1D g(64, -8, 8, 32, 1.0);
    LiouvilleSolver L(g, PotentialSpec::linear(50.0), {});
    auto f = blob(g, 0, 0, 1, 1);
    double suggested = 0;
    try {
        L.step(f, 0.1);
        FAIL("expected rejection");
    } catch (const StepRejected& e) {
        suggested = e.suggested_dt();
    }
    REQUIRE(suggested > 0);
    CHECK_NOTHROW(L.step(f, suggested));
    auto other = blob(Grid1D(32, -8, 8, 32, 1.0), 0, 0, 1, 1);
    CHECK_THROWS_AS(L.step(other, suggested), ValidationError);
}

TEST_CASE("focusing action wave reaches a caustic") {
    const Grid1D g(256, -8, 8, 64, 1.0);
    const double T = 1.0;
    ActionWaveState s(g);
    for (std::size_t i = 0; i < g.n_q(); ++i) {
        s.n[i] = std::exp(-g.q(i) * g.q(i));
        s.S[i] = -g.q(i) * g.q(i) / (2 * T);
    }
    const double mass0 = s.mass();
    const double dt = 1e-3;
    for (int k = 0; k < 500; ++k) s = action_wave_step(s, PotentialSpec::free(), dt);
    // S(q,t) = -q^2 / (2 (T - t)) up to a constant; n scales by T/(T-t)
    const auto c = action_curvature(s);
    CHECK(c[128] == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(s.mass() == doctest::Approx(mass0).epsilon(1e-12));
    CHECK(s.n[128] == doctest::Approx(2.0).epsilon(1e-5));
    // the step that would cross the focus is refused, with the time recorded
    try {
        action_wave_step(s, PotentialSpec::free(), dt, {}, 1e-3);
        FAIL("expected a caustic");
    } catch (const CausticError& e) {
        CHECK(e.breakdown_time() == doctest::Approx(0.5));
    }
    // close to the focus the solver refuses instead of returning garbage
    CHECK_THROWS_AS(
        [&] {
            for (int k = 0; k < 1000; ++k) s = action_wave_step(s, PotentialSpec::free(), dt);
        }(),
        SolverError);
    CHECK(s.time < 1.0);
}

TEST_CASE("embedded action wave") {
    const Grid1D g(64, -8, 8, 64, 1.0);
    ActionWaveState s(g);
    for (std::size_t i = 0; i < g.n_q(); ++i) {
        s.n[i] = std::exp(-g.q(i) * g.q(i)) / std::sqrt(M_PI);
        s.S[i] = 0.7 * g.q(i);
    }
    const auto f = embed_action_wave(s, 0.5);
    const auto m = moments(f, PotentialSpec::free());
    CHECK(m.mean_p == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(embed_action_wave(s, 2.0 * g.dp() * g.dp()), ValidationError);
}
