#include "phaselab/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "phaselab/classical.hpp"
#include "phaselab/error.hpp"
#include "phaselab/quantum.hpp"
#include "phaselab/transforms.hpp"

namespace phaselab {
namespace {

std::size_t step_count(double t_final, double dt) {
    if (!(dt > 0.0)) throw ValidationError("coherence: dt must be positive");
    if (!(t_final >= 0.0)) throw ValidationError("coherence: t_final must be >= 0");
    const double n = std::round(t_final / dt);
    if (std::abs(n * dt - t_final) > 1e-9 * std::max(1.0, t_final))
        throw ValidationError("coherence: t_final must be a whole number of steps");
    return static_cast<std::size_t>(n);
}

double relative_norm(const PhaseField& f, const PhaseField& ref) {
    const double r = ref.l2_norm();
    return r > 0.0 ? f.l2_norm() / r : f.l2_norm();
}

}  // namespace

PhaseField moyal_correction(const PhaseField& W, const PotentialSpec& V, const Units& units) {
    const Grid1D& g = W.grid;
    PhaseField out(g);
    if (V.is_polynomial() && V.degree() < 3) return out;
    const auto d3 = potential_derivative(V, g, 3);
    auto ft = fourier_momentum(W);
    const std::size_t nq = g.n_q(), np = g.n_p();
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < np; ++j) {
            const double k = j == 0 ? 0.0 : g.k(j);  // Nyquist column dropped
            // d/dp <-> -ik, so d^3/dp^3 <-> i k^3
            ft.at(i, j) *= cplx(0.0, k * k * k) * (units.sigma * units.sigma / 24.0) * d3[i];
        }
    return inverse_fourier_momentum(ft);
}

CoherenceReport coherence_residual(const WaveField& psi0, const PotentialSpec& V, double t_final, double dt,
                                   const Units& units, const CoherenceOptions& options) {
    const std::size_t steps = step_count(t_final, dt);
    const std::size_t every = options.sample_every ? options.sample_every : std::max<std::size_t>(1, steps / 50);
    const Grid1D& g = psi0.grid;
    LiouvilleSolver classical(g, V, units);
    TdseSolver quantum(g, V, units, options.fourth_order_tdse);

    WaveField psi = psi0;
    PhaseField wl = wigner(psi0, g.sigma());
    CoherenceReport report;
    report.potential_degree = V.degree();

    auto sample = [&](double t) {
        const PhaseField wq = wigner(psi, g.sigma());
        PhaseField diff = wl;
        for (std::size_t x = 0; x < diff.values.size(); ++x) diff.values[x] -= wq.values[x];
        report.times.push_back(t);
        report.residual_norm.push_back(relative_norm(diff, wq));
        report.moyal_estimate.push_back(relative_norm(moyal_correction(wq, V, units), wq));
    };
    sample(0.0);
    std::size_t done = 0;
    while (done < steps) {
        const std::size_t chunk = std::min(every, steps - done);
        classical.advance(wl, dt, chunk);
        quantum.advance(psi, dt, chunk);
        done += chunk;
        sample(static_cast<double>(done) * dt);
    }
    return report;
}

PhaseField coherence_gap(const WaveField& psi0, const PotentialSpec& V, double t, double dt, const Units& units) {
    const std::size_t steps = step_count(t, dt);
    const Grid1D& g = psi0.grid;
    PhaseField wl = wigner(psi0, g.sigma());
    WaveField psi = psi0;
    LiouvilleSolver(g, V, units).advance(wl, dt, steps);
    TdseSolver(g, V, units, true).advance(psi, dt, steps);
    const PhaseField wq = wigner(psi, g.sigma());
    for (std::size_t x = 0; x < wl.values.size(); ++x) wl.values[x] -= wq.values[x];
    return wl;
}

double superposition_check(const WaveField& psi1, const WaveField& psi2, const PotentialSpec& V, double t, double dt,
                           const Units& units) {
    if (!psi1.grid.compatible(psi2.grid)) throw ValidationError("superposition_check: grid mismatch");
    WaveField sum = psi1 + psi2;
    const double n = sum.norm();
    if (n > 0.0) sum.normalize(1.0);
    const auto report = coherence_residual(sum, V, t, dt, units, {std::max<std::size_t>(1, step_count(t, dt)), false});
    return report.residual_norm.back();
}

}  // namespace phaselab
