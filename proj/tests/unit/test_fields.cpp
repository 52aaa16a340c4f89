#include <doctest.h>

#include <cmath>

#include "phaselab/fields.hpp"
#include "phaselab/quantum.hpp"

using namespace phaselab;

TEST_CASE("wave field norm and inner product") {
    const Grid1D g(64, -8, 8, 64, 1.0);
    WaveField a(g), b(g);
    for (std::size_t i = 0; i < 64; ++i) {
        a.values[i] = std::exp(-g.q(i) * g.q(i) / 2);
        b.values[i] = cplx(0, 1) * a.values[i];
    }
    a.normalize();
    CHECK(a.norm() == doctest::Approx(1.0));
    b.normalize();
    CHECK(std::abs(a.inner(b) - cplx(0, 1)) < 1e-14);
    const auto s = a + b;
    CHECK(s.norm() == doctest::Approx(2.0));
}

TEST_CASE("pure density matrix diagnostics") {
    const Grid1D g(64, -10, 10, 64, 1.0);
    const auto psi = glauber_wavefunction(GaussianCoherentParams::for_oscillator(1, 1, 0.5, {}), g);
    const auto rho = DensityMatrixField::pure(psi);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho.hermiticity_defect() < 1e-15);
    CHECK(std::abs(rho.min_eigenvalue()) < 1e-12);
    // <p^2> = Y^2 + sigma m omega / 2
    CHECK(rho.mean_p2(1.0) == doctest::Approx(0.25 + 0.5).epsilon(1e-10));
}

TEST_CASE("phase field norms") {
    const Grid1D g(16, -1, 1, 16, 1.0);
    PhaseField f(g), h(g);
    f.values.assign(f.values.size(), 2.0);
    h.values.assign(h.values.size(), 1.0);
    CHECK(f.relative_l2(h) == doctest::Approx(1.0));
    CHECK(f.mass() == doctest::Approx(2.0 * g.size() * g.cell_area()));
    CHECK(f.tail_fraction() > 0.2);
}
