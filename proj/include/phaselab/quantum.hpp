#pragma once

#include <vector>

#include "phaselab/fields.hpp"
#include "phaselab/potential.hpp"
#include "phaselab/units.hpp"

namespace phaselab {

struct EigenPair {
    double energy = 0.0;
    WaveField state;
};

/// Split-operator propagator exp(-iT dt/2s) exp(-iV dt/s) exp(-iT dt/2s),
/// with s = sigma. `fourth_order` composes three such steps (Yoshida).
class TdseSolver {
public:
    TdseSolver(const Grid1D& grid, const PotentialSpec& V, const Units& units, bool fourth_order = false);

    void step(WaveField& psi, double dt) const;
    void advance(WaveField& psi, double dt, std::size_t steps) const;

    /// Rejects dt when the potential phase changes by more than pi/2 between
    /// neighbouring nodes inside the support of psi.
    void check_step(const WaveField& psi, double dt) const;

private:
    void strang(std::vector<cplx>& v, double dt) const;

    Grid1D grid_;
    Units units_;
    bool fourth_order_;
    std::vector<double> V_;
    std::vector<double> dV_;
    std::vector<double> kinetic_;  // sigma^2 kappa^2 / 2m in FFT order
};

WaveField tdse_step(const WaveField& psi, const PotentialSpec& V, double dt, const Units& units = {});

/// H psi with the spectral kinetic operator.
WaveField apply_hamiltonian(const WaveField& psi, const PotentialSpec& V, const Units& units = {});

/// <psi|H|psi> / <psi|psi>.
double energy_expectation(const WaveField& psi, const PotentialSpec& V, const Units& units = {});

/// Lowest `count` eigenpairs of the Fourier-grid Hamiltonian on `grid`.
/// States are normalized to dq sum |psi|^2 = 1 with the largest-magnitude
/// node made real and positive.
std::vector<EigenPair> stationary_states(const PotentialSpec& V, const Grid1D& grid, std::size_t count,
                                         const Units& units = {});

/// psi_G(q) = sqrt(g^X(q)) exp(i q Y / sigma), normalized on the grid.
WaveField glauber_wavefunction(const GaussianCoherentParams& params, const Grid1D& grid, const Units& units = {});

}  // namespace phaselab
