#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "phaselab/classical.hpp"
#include "phaselab/error.hpp"
#include "phaselab/quantum.hpp"
#include "phaselab/transforms.hpp"

using namespace phaselab;

TEST_CASE("harmonic spectrum and eigenfunctions") {
    for (double s : {0.5, 1.0}) {
        const Units u{s, 1.0, 1.0};
        const Grid1D g(256, -16, 16, 128, s);
        const auto V = PotentialSpec::harmonic(1, 1);
        const auto pairs = stationary_states(V, g, 12, u);
        REQUIRE(pairs.size() == 12);
        for (int n = 0; n < 12; ++n) {
            CHECK(pairs[n].energy == doctest::Approx(s * (n + 0.5)).epsilon(1e-11));
            CHECK(pairs[n].state.norm() == doctest::Approx(1.0).epsilon(1e-12));
            // compare with the Hermite function up to sign
            double dot = 0;
            for (std::size_t i = 0; i < g.n_q(); ++i)
                dot += pairs[n].state.values[i].real() * oracle::hermite_functions(g.q(i), n, s)[n] * g.dq();
            CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-10));
            const auto H = apply_hamiltonian(pairs[n].state, V, u);
            double res = 0;
            for (std::size_t i = 0; i < g.n_q(); ++i) res = std::max(res, std::abs(H.values[i] - pairs[n].energy * pairs[n].state.values[i]));
            CHECK(res < 1e-9);
        }
    }
}

TEST_CASE("quartic ground state is real and positive") {
    const Grid1D g(128, -8, 8, 64, 1.0);
    const auto pairs = stationary_states(PotentialSpec::polynomial({0, 0, 0, 0, 1}), g, 4);
    // reference value of the x^4 ground state with m = hbar = 1, H = p^2/2 + x^4
    CHECK(pairs[0].energy == doctest::Approx(0.667986259155777).epsilon(1e-9));
    for (const auto& v : pairs[0].state.values) {
        CHECK(std::abs(v.imag()) < 1e-14);
        CHECK(v.real() > -1e-12);
    }
    CHECK_THROWS_AS(stationary_states(PotentialSpec::free(), g, 40), ValidationError);
}

TEST_CASE("free packet spreads at the analytic rate") {
    const Units u{0.7, 1.5, 1.0};
    const Grid1D g(512, -40, 40, 256, u.sigma);
    const double a = 0.8;
    WaveField psi(g);
    for (std::size_t i = 0; i < g.n_q(); ++i) psi.values[i] = std::polar(std::exp(-g.q(i) * g.q(i) / (2 * a)), 0.5 * g.q(i) / u.sigma);
    psi.normalize();
    TdseSolver T(g, PotentialSpec::free(), u);
    const double t = 3.0;
    T.advance(psi, 0.1, 30);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-13));
    const auto m = moments(wigner(psi, u.sigma), PotentialSpec::free(), u);
    const double var = m.density.empty() ? 0 : [&] {
        double v = 0;
        for (std::size_t i = 0; i < g.n_q(); ++i) v += std::norm(psi.values[i]) * std::pow(g.q(i) - m.mean_q, 2) * g.dq();
        return v;
    }();
    CHECK(m.mean_q == doctest::Approx(0.5 * t / u.mass).epsilon(1e-11));
    CHECK(var == doctest::Approx(0.5 * a * (1 + std::pow(u.sigma * t / (u.mass * a), 2))).epsilon(1e-11));
}

TEST_CASE("coherent state follows the classical orbit") {
    const Grid1D g(256, -20, 20, 128, 1.0);
    const auto V = PotentialSpec::harmonic(1, 1);
    const auto P = GaussianCoherentParams::for_oscillator(1, 2.0, 1.0, {});
    for (bool fourth : {false, true}) {
        auto psi = glauber_wavefunction(P, g);
        TdseSolver(g, V, {}, fourth).advance(psi, 0.01, 150);
        const auto c = TrajectoryState{2.0, 1.0}.evolved(1.0, 1.5, {});
        auto P2 = P;
        P2.X = c.X;
        P2.Y = c.Y;
        CHECK(std::norm(psi.inner(glauber_wavefunction(P2, g))) == doctest::Approx(1.0).epsilon(fourth ? 1e-12 : 1e-6));
        CHECK(energy_expectation(psi, V) == doctest::Approx(0.5 * (4 + 1) + 0.5).epsilon(fourth ? 1e-9 : 1e-4));
    }
}

TEST_CASE("split-step orders") {
    const Grid1D g(128, -10, 10, 64, 1.0);
    const auto V = PotentialSpec::polynomial({0, 0, 0.5, 0, 0.05});
    const auto psi0 = glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, 1.0, 0, {}), g);
    auto run = [&](bool fourth, double dt) {
        auto psi = psi0;
        TdseSolver(g, V, {}, fourth).advance(psi, dt, static_cast<std::size_t>(std::lround(1.0 / dt)));
        return psi;
    };
    const auto ref = run(true, 1e-3);
    auto err = [&](const WaveField& w) {
        double e = 0;
        for (std::size_t i = 0; i < g.n_q(); ++i) e += std::norm(w.values[i] - ref.values[i]) * g.dq();
        return std::sqrt(e);
    };
    const double e2a = err(run(false, 0.04)), e2b = err(run(false, 0.02));
    const double e4a = err(run(true, 0.05)), e4b = err(run(true, 0.025));
    CHECK(e2a / e2b == doctest::Approx(4.0).epsilon(0.05));
    CHECK(e4a / e4b == doctest::Approx(16.0).epsilon(0.1));
    CHECK(tdse_step(psi0, V, 0.01).norm() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("phase-wrap guard") {
    const Grid1D g(64, -8, 8, 32, 1.0);
    const auto psi = glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, 0, 0, {}), g);
    TdseSolver T(g, PotentialSpec::linear(100.0), {});
    double dt = 0;
    try {
        auto w = psi;
        T.step(w, 1.0);
    } catch (const StepRejected& e) {
        dt = e.suggested_dt();
    }
    REQUIRE(dt > 0);
    auto w = psi;
    CHECK_NOTHROW(T.step(w, dt));
}

TEST_CASE("glauber validation") {
    const Grid1D g(64, -8, 8, 32, 1.0);
    auto P = GaussianCoherentParams::for_oscillator(1, 0, 0, {});
    P.b *= 1.1;
    CHECK_THROWS_AS(glauber_wavefunction(P, g), ValidationError);
    CHECK_THROWS_AS(glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, 0, 0, {0.5, 1, 1}), g, {0.5, 1, 1}),
                    ValidationError);
    const auto psi = glauber_wavefunction(GaussianCoherentParams::for_oscillator(2.0, 0.3, 0, {}), g);
    double peak = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < g.n_q(); ++i)
        if (std::abs(psi.values[i]) > peak) peak = std::abs(psi.values[at = i]);
    CHECK(std::abs(g.q(at) - 0.3) <= 0.5 * g.dq() + 1e-12);
}
