#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "phaselab/coherence.hpp"
#include "phaselab/error.hpp"
#include "phaselab/quantum.hpp"
#include "phaselab/transforms.hpp"

using namespace phaselab;

namespace {

WaveField coherent(const Grid1D& g, double X, double Y, const Units& u = {}) {
    return glauber_wavefunction(GaussianCoherentParams::for_oscillator(1.0, X, Y, u), g, u);
}

}  // namespace

TEST_CASE("Moyal term vanishes below cubic order") {
    const Grid1D g(64, -10, 10, 32, 1.0);
    const auto W = wigner(coherent(g, 1, 0), 1.0);
    for (const auto& V : {PotentialSpec::free(), PotentialSpec::linear(0.4), PotentialSpec::harmonic(1, 2)}) {
        const auto M = moyal_correction(W, V);
        CHECK(M.l2_norm() == 0.0);
    }
}

TEST_CASE("Moyal term of a Gaussian under a cubic potential") {
    const double s = 0.7, c = 0.3;
    const Units u{s, 1.0, 1.0};
    const Grid1D g(128, -12, 12, 64, s);
    const double X = 0.5, Y = 0.4, a = s, b = s;
    const auto W = wigner(coherent(g, X, Y, u), s);
    const auto M = moyal_correction(W, PotentialSpec::polynomial({0, 0, 0, c, 0}), u);
    double worst = 0, peak = 0;
    for (std::size_t i = 0; i < g.n_q(); ++i)
        for (std::size_t l = 0; l < g.n_p(); ++l) {
            const double v = g.p(l) - Y;
            const double d3 = (-8 * v * v * v / (b * b * b) + 12 * v / (b * b)) *
                              oracle::gaussian_wigner(g.q(i), g.p(l), X, Y, a, s);
            const double ref = s * s / 24 * 6 * c * d3;
            worst = std::max(worst, std::abs(M.at(i, l) - ref));
            peak = std::max(peak, std::abs(ref));
        }
    CHECK(worst < 1e-9 * peak);
}

TEST_CASE("quadratic potentials keep Wigner functions classical") {
    const Grid1D g(256, -16, 16, 128, 1.0);
    const auto r = coherence_residual(coherent(g, 2.0, 0.0), PotentialSpec::harmonic(1, 1), 1.0, 0.01);
    REQUIRE(r.times.size() == r.residual_norm.size());
    CHECK(r.times.front() == 0.0);
    CHECK(r.times.back() == doctest::Approx(1.0));
    CHECK(r.residual_norm.front() == 0.0);
    CHECK(r.potential_degree == 2);
    for (double v : r.residual_norm) CHECK(v < 1e-10);
    for (double v : r.moyal_estimate) CHECK(v == 0.0);
    // superpositions carry their interference term classically as well
    CHECK(superposition_check(coherent(g, -3, 0), coherent(g, 3, 0), PotentialSpec::harmonic(1, 1), 1.0, 0.01) < 1e-10);
}

TEST_CASE("quartic potential breaks coherence") {
    const Grid1D g(128, -8, 8, 64, 1.0);
    const auto V = PotentialSpec::polynomial({0, 0, 0.5, 0, 0.1});
    const auto r = coherence_residual(coherent(g, 2.0, 0.0), V, 1.0, 0.001, {}, {100, false});
    CHECK(r.times.size() == 11);
    CHECK(r.potential_degree == 4);
    CHECK(r.residual_norm.back() > 1e-2);
    CHECK(r.moyal_estimate.back() > 0.0);
    for (std::size_t k = 2; k < r.residual_norm.size(); ++k) CHECK(r.residual_norm[k] > r.residual_norm[1]);
}

TEST_CASE("short-time gap grows at the Moyal rate") {
    const Grid1D g(128, -16, 16, 64, 1.0);
    const auto V = PotentialSpec::polynomial({0, 0, 0.5, 0, 0.1});
    const auto psi = coherent(g, 2.0, 0.0);
    const auto M = moyal_correction(wigner(psi, 1.0), V);
    // gap(t) = t M + O(t^2): the mismatch in the rate shrinks linearly with t
    double mismatch[2];
    for (int r = 0; r < 2; ++r) {
        const double t = r ? 0.002 : 0.01;
        const auto gap = coherence_gap(psi, V, t, t / 20);
        CHECK(gap.l2_norm() / t == doctest::Approx(M.l2_norm()).epsilon(0.01));
        PhaseField d = gap;
        for (std::size_t x = 0; x < d.values.size(); ++x) d.values[x] = gap.values[x] / t - M.values[x];
        mismatch[r] = d.l2_norm() / M.l2_norm();
    }
    CHECK(mismatch[1] < 0.05);
    CHECK(mismatch[0] / mismatch[1] == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("coherence input validation") {
    const Grid1D g(32, -8, 8, 16, 1.0);
    const auto psi = coherent(g, 0, 0);
    CHECK_THROWS_AS(coherence_residual(psi, PotentialSpec::free(), 1.0, 0.3), ValidationError);
    CHECK_THROWS_AS(coherence_residual(psi, PotentialSpec::free(), 1.0, 0.0), ValidationError);
    CHECK(std::string(kResidualNorm).find("L2") != std::string::npos);
}
