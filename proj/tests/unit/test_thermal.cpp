#include <doctest.h>

#include <cmath>
#include <random>

#include "phaselab/classical.hpp"
#include "phaselab/error.hpp"
#include "phaselab/quantum.hpp"
#include "phaselab/thermal.hpp"
#include "phaselab/transforms.hpp"

using namespace phaselab;

namespace {

PhaseField gaussian(const Grid1D& g, double X, double Y, double vq, double vp) {
    PhaseField f(g, true);
    for (std::size_t i = 0; i < g.n_q(); ++i)
        for (std::size_t l = 0; l < g.n_p(); ++l)
            f.at(i, l) = std::exp(-std::pow(g.q(i) - X, 2) / (2 * vq) - std::pow(g.p(l) - Y, 2) / (2 * vp)) /
                         (2 * M_PI * std::sqrt(vq * vp));
    return f;
}

double p_variance(const PhaseField& f) {
    const auto m = moments(f, PotentialSpec::free());
    return m.mean_p2 - m.mean_p * m.mean_p;
}

double rel_change(const DensityMatrixField& a, const DensityMatrixField& b) {
    double num = 0, den = 0;
    for (std::size_t x = 0; x < a.values.size(); ++x) {
        num += std::norm(a.values[x] - b.values[x]);
        den += std::norm(b.values[x]);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("cold friction decays the mean momentum exponentially") {
    const Units u{1.0, 2.0, 1.0};
    const Grid1D g(128, -16, 16, 256, 1.0);
    const auto tp = ThermalParams::make(0.5, 1e-6, u);
    FokkerPlanckSolver S(g, PotentialSpec::free(), tp, u);
    auto f = gaussian(g, 0, 1.0, 1.0, 0.25);
    S.advance(f, 0.01, 200);
    const auto m = moments(f, PotentialSpec::free(), u);
    CHECK(std::abs(m.mean_p - std::exp(-0.5 * 2.0 / u.mass)) < 1e-6);
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("momentum variance relaxes to m kT at rate 2 gamma / m") {
    const Units u;
    const Grid1D g(128, -16, 16, 256, 1.0);
    const auto tp = ThermalParams::make(0.5, 1.0, u);
    FokkerPlanckSolver S(g, PotentialSpec::free(), tp, u);
    auto f = gaussian(g, 0, 0.0, 1.0, 0.25);
    for (int k = 1; k <= 4; ++k) {
        S.advance(f, 0.01, 100);
        CHECK(std::abs(p_variance(f) - (1.0 + (0.25 - 1.0) * std::exp(-1.0 * k))) < 1e-4);
    }
}

TEST_CASE("Boltzmann equilibrium") {
    const Units u{1.0, 1.5, 1.0};
    const double w = 0.8, beta = 2.0;
    const Grid1D g(128, -12, 12, 64, 1.0);
    const auto V = PotentialSpec::harmonic(u.mass, w);
    const auto fe = boltzmann_equilibrium(V, beta, g, u);
    CHECK(fe.mass() == doctest::Approx(1.0).epsilon(1e-12));
    const auto m = moments(fe, V, u);
    double vq = 0;
    for (std::size_t i = 0; i < g.n_q(); ++i) vq += m.density[i] * g.q(i) * g.q(i) * g.dq();
    CHECK(vq == doctest::Approx(1.0 / (beta * u.mass * w * w)).epsilon(1e-9));
    CHECK(m.mean_p2 == doctest::Approx(u.mass / beta).epsilon(1e-9));
    // large beta concentrates at the minimum
    const auto cold = boltzmann_equilibrium(PotentialSpec::polynomial({0, -1, 0.5, 0, 0}), 50.0, g, u);
    CHECK(moments(cold, V).mean_q == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(boltzmann_equilibrium(PotentialSpec::linear(1.0), 1.0, g, u), ValidationError);
    CHECK_THROWS_AS(boltzmann_equilibrium(PotentialSpec::polynomial({0, 0, 1, 0, -0.01}), 1.0, g, u), ValidationError);
    CHECK_THROWS_AS(boltzmann_equilibrium(V, 0.01, g, u), ValidationError);
}

TEST_CASE("Boltzmann density is stationary under the Fokker-Planck step") {
    const Units u;
    const Grid1D g(128, -12, 12, 64, 1.0);
    for (const auto& V : {PotentialSpec::harmonic(1, 1), PotentialSpec::polynomial({0, 0, 0.5, 0, 0.1})}) {
        const auto tp = ThermalParams::make(0.5, 1.0, u);
        const auto fe = boltzmann_equilibrium(V, tp.beta, g, u);
        CHECK(fokker_planck_step(fe, V, tp, 1e-3, u).relative_l2(fe) < 1e-8);
    }
}

TEST_CASE("relative entropy decreases monotonically on a quartic well") {
    const Units u;
    const Grid1D g(128, -8, 8, 128, 1.0);
    const auto V = PotentialSpec::polynomial({0, 0, 0.5, 0, 0.1});
    const auto tp = ThermalParams::make(1.0, 1.0, u);
    const auto fe = boltzmann_equilibrium(V, tp.beta, g, u);
    FokkerPlanckSolver S(g, V, tp, u);
    auto f = gaussian(g, 0.5, 0.5, 0.5, 0.5);
    double prev = relative_entropy(f, fe);
    for (int k = 0; k < 20; ++k) {
        S.advance(f, 0.001, 150);
        const double now = relative_entropy(f, fe);
        CHECK(now <= prev);
        prev = now;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("friction-diffusion step rejects negative output") {
    const Units u;
    const Grid1D g(32, -8, 8, 32, 1.0);
    FokkerPlanckSolver S(g, PotentialSpec::free(), ThermalParams::make(0.5, 1.0, u), u);
    PhaseField f(g, true);
    f.at(16, 16) = 1.0;  // a single spike rings under spectral shifts
    CHECK_THROWS_AS(S.step(f, 0.3), SolverError);
}

TEST_CASE("Fourier form of the Fokker-Planck equation") {
    const Units u;
    const Grid1D g(128, -10, 10, 64, 1.0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    PhaseField f(g);
    for (int c = 0; c < 5; ++c) {
        const double X = U(rng), Y = U(rng), w = 0.5 + U(rng);
        const auto blob = gaussian(g, X, Y, 0.6 + 0.2 * c, 0.8);
        for (std::size_t x = 0; x < f.values.size(); ++x) f.values[x] += w * blob.values[x];
    }
    const auto tp = ThermalParams::make(0.7, 1.3, u);
    for (const auto& V : {PotentialSpec::harmonic(1, 1), PotentialSpec::polynomial({0, 0, 0.5, 0, 0.05})})
        CHECK(fp_fourier_residual(f, V, tp, u) < 1e-8);
    // gamma = 0 leaves the Liouville identity
    CHECK(fp_fourier_residual(f, PotentialSpec::harmonic(1, 1), ThermalParams::make(0.0, 1.0, u), u) < 1e-8);
    // at equilibrium both sides vanish
    const auto fe = boltzmann_equilibrium(PotentialSpec::harmonic(1, 1), 1.0, g, u);
    const auto id = fp_fourier_identity(fe, PotentialSpec::harmonic(1, 1), ThermalParams::make(0.7, 1.0, u), u);
    CHECK(id.lhs_norm < 1e-10);
    CHECK(id.rhs_norm < 1e-10);
}

TEST_CASE("quantum FP without friction is the TDSE") {
    const Units u;
    const Grid1D g(64, -12, 12, 32, 1.0);
    const auto V = PotentialSpec::polynomial({0, 0, 0.5, 0, 0.02});
    const auto psi0 = glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, 1.5, 0, u), g, u);
    // one qfp step holds two unitary half steps
    auto psi = psi0;
    TdseSolver(g, V, u).advance(psi, 0.005, 200);
    auto rho = DensityMatrixField::pure(psi0);
    QuantumFokkerPlanck(g, V, ThermalParams::make(0.0, 1.0, u), u).advance(rho, 0.01, 100);
    CHECK(rel_change(rho, DensityMatrixField::pure(psi)) < 1e-12);
}

TEST_CASE("quantum FP keeps trace and Hermiticity") {
    const Units u;
    const Grid1D g(64, -12, 12, 32, 1.0);
    const auto V = PotentialSpec::harmonic(1, 1);
    auto psi = glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, -2, 0, u), g, u) +
               glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, 2, 0, u), g, u);
    psi.normalize();
    auto rho = DensityMatrixField::pure(psi);
    QuantumFokkerPlanck Q(g, V, ThermalParams::make(0.3, 1.0, u), u);
    for (int k = 0; k < 200; ++k) {
        const double t0 = rho.trace();
        Q.step(rho, 0.005);
        CHECK(std::abs(rho.trace() - t0) < 1e-12);
    }
    CHECK(rho.hermiticity_defect() < 1e-10);
    CHECK(rho.purity() < 1.0);
    auto bad = rho;
    bad.at(1, 2) += 0.01;
    CHECK_THROWS_AS(Q.step(bad, 0.005), ValidationError);
}

TEST_CASE("decoherence of a cat state") {
    // free motion keeps the two components in place for short times
    const Units u;
    const Grid1D g(64, -12, 12, 32, 1.0);
    const auto V = PotentialSpec::free();
    auto psi = glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, -3, 0, u), g, u) +
               glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, 3, 0, u), g, u);
    psi.normalize();
    const auto tp = ThermalParams::make(0.02, 1.0, u);
    auto rho = DensityMatrixField::pure(psi), ref = rho;
    const double t = 0.5;
    QuantumFokkerPlanck(g, V, tp, u).advance(rho, 0.005, 100);
    QuantumFokkerPlanck(g, V, ThermalParams::make(0.0, 1.0, u), u).advance(ref, 0.005, 100);
    const std::size_t a = g.nearest_q(-3.0).first, b = g.nearest_q(3.0).first;
    const double expect = std::exp(-tp.gamma * tp.kT() * 36.0 * t);
    CHECK(std::abs(rho.at(a, b)) / std::abs(ref.at(a, b)) == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("high temperature harmonic bath equilibrates p^2") {
    const Units u{0.2, 1.0, 1.0};
    const Grid1D g(64, -8, 8, 32, u.sigma);
    const auto V = PotentialSpec::harmonic(1, 1);
    const auto tp = ThermalParams::make(1.0, 1.0, u);
    auto rho = DensityMatrixField::pure(glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, 1.0, 0, u), g, u));
    QuantumFokkerPlanck(g, V, tp, u).advance(rho, 0.01, 1000);
    CHECK(rho.mean_p2(u.sigma) == doctest::Approx(u.mass * tp.kT()).epsilon(0.05));
}

TEST_CASE("equilibrium occupations") {
    const Units u;
    const Grid1D g(64, -16, 16, 32, 1.0);
    for (auto st : {Statistics::fermi, Statistics::bose}) {
        const QuantumEqParams p{3.0, st, 1.0};
        const auto f = quantum_equilibrium(p, u, g);
        double sum = 0;
        for (const auto& o : occupations(p, g, u)) sum += o.value;
        CHECK(f.trace() == doctest::Approx(sum).epsilon(1e-12));
        CHECK(f.hermiticity_defect() < 1e-14);
        // classical limit
        const QuantumEqParams far{25.0, st, 1.0};
        for (const auto& o : occupations(far, g, u))
            CHECK(std::abs(o.value / std::exp(-o.energy - 25.0) - 1.0) < 1e-6);
    }
    // degenerate fermi gas: a step at E_F
    const double beta = 200.0, ef = 0.5;
    for (const auto& o : occupations({-beta * ef, Statistics::fermi, beta}, g, u)) {
        if (o.energy < ef - 0.05) CHECK(o.value == doctest::Approx(1.0));
        if (o.energy > ef + 0.05) CHECK(o.value < 1e-4);
    }
    CHECK_THROWS_AS(quantum_equilibrium({0.0, Statistics::bose, 1.0}, u, g), ValidationError);
    CHECK_THROWS_AS(quantum_equilibrium({-1.0, Statistics::bose, 1.0}, u, g), ValidationError);
}

TEST_CASE("stationarity identity p g(1 -/+ g) = -(m/beta) g'") {
    // checked on the analytic occupation by central differences
    for (double beta : {0.5, 1.0, 2.0})
        for (int sgn : {+1, -1}) {
            const double alpha = sgn > 0 ? -1.0 : 2.0, m = 1.3, h = 1e-4;
            auto g = [&](double p) {
                const double x = beta * p * p / (2 * m) + alpha;
                return 1.0 / (std::exp(x) + sgn);
            };
            for (double p : {-2.0, -0.4, 0.3, 1.7}) {
                const double dg = (g(p + h) - g(p - h)) / (2 * h);
                CHECK(p * g(p) * (1 - sgn * g(p)) == doctest::Approx(-(m / beta) * dg).epsilon(1e-7));
            }
        }
}

TEST_CASE("nonlinear equilibria are stationary") {
    const Units u;
    const Grid1D g(128, -16, 16, 32, 1.0);
    for (double beta : {0.5, 1.0, 2.0}) {
        const auto tp = ThermalParams::make(0.5, 1.0 / beta, u);
        for (auto st : {Statistics::fermi, Statistics::bose}) {
            const QuantumEqParams p{st == Statistics::fermi ? -1.0 : 2.0, st, beta};
            const auto f = quantum_equilibrium(p, u, g);
            CHECK(rel_change(nonlinear_qfp_step(f, tp, 1e-3, st, u), f) < 1e-8);
        }
    }
}

TEST_CASE("dilute nonlinear step reduces to the linear one") {
    const Units u;
    const Grid1D g(32, -8, 8, 32, 1.0);
    const auto tp = ThermalParams::make(0.5, 1.0, u);
    auto psi = glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, 0.5, 0.3, u), g, u);
    auto f = DensityMatrixField::pure(psi);
    for (auto& v : f.values) v *= 1e-5;
    const auto lin = qfp_step(f, PotentialSpec::free(), tp, 1e-3, u);
    for (auto st : {Statistics::fermi, Statistics::bose}) {
        const auto non = nonlinear_qfp_step(f, tp, 1e-3, st, u);
        CHECK(rel_change(non, lin) < 1e-6);
    }
}

TEST_CASE("fermi occupations above one are refused") {
    const Units u;
    const Grid1D g(32, -8, 8, 32, 1.0);
    auto f = quantum_equilibrium({-1.0, Statistics::fermi, 1.0}, u, g);
    for (auto& v : f.values) v *= 3.0;
    CHECK_THROWS_AS(nonlinear_qfp_step(f, ThermalParams::make(0.5, 1.0, u), 1e-3, Statistics::fermi, u), SolverError);
}
