#pragma once

#include <vector>

#include "phaselab/fields.hpp"
#include "phaselab/potential.hpp"
#include "phaselab/units.hpp"

namespace phaselab {

/// Center of a harmonic Gaussian, moving on the classical trajectory.
struct TrajectoryState {
    double X = 0.0;
    double Y = 0.0;

    /// Exact harmonic flow X' = Y/m, Y' = -m omega^2 X over time t.
    TrajectoryState evolved(double omega, double t, const Units& units) const noexcept;
};

/// Strang-split Liouville propagator: half drift in q by p/m, kick in p by
/// -V', half drift. Both sub-steps are periodic bandlimited translations,
/// so free streaming and uniform kicks are exact up to rounding.
class LiouvilleSolver {
public:
    LiouvilleSolver(const Grid1D& grid, const PotentialSpec& V, const Units& units);

    /// One step. Throws StepRejected when dt * max|V'| over the support of f
    /// exceeds one momentum cell (support: rows above 1e-8 of the peak).
    void step(PhaseField& f, double dt) const;
    /// `steps` consecutive steps with adjacent half drifts fused.
    void advance(PhaseField& f, double dt, std::size_t steps) const;

    void drift(PhaseField& f, double tau) const;
    void kick(PhaseField& f, double tau) const;
    void check_step(const PhaseField& f, double dt) const;

    const std::vector<double>& force_gradient() const noexcept { return dV_; }

private:
    Grid1D grid_;
    Units units_;
    std::vector<double> dV_;
};

PhaseField liouville_step(const PhaseField& f, const PotentialSpec& V, double dt, const Units& units = {});

/// One RK4 step of the continuity and Hamilton-Jacobi pair
///   dS/dt = -(dS/dq)^2/2m - V,   dn/dt = -d/dq (n dS/dq / m).
/// dS/dq uses 4th-order differences (S is not periodic); the flux
/// divergence is spectral so sum(n) is conserved exactly. Throws
/// CausticError when max|d2S/dq2| dt/m reaches `caustic_threshold`.
ActionWaveState action_wave_step(const ActionWaveState& state, const PotentialSpec& V, double dt,
                                 const Units& units = {}, double caustic_threshold = 0.5);

/// dS/dq on the nodes (non-periodic 4th-order differences).
std::vector<double> action_gradient(const ActionWaveState& state);
std::vector<double> action_curvature(const ActionWaveState& state);

/// f(q,p) = n(q) (pi b)^(-1/2) exp(-(p - dS/dq)^2 / b).
PhaseField embed_action_wave(const ActionWaveState& state, double width_b);

/// g^X(t)(q) g^Y(t)(p) with the center on the harmonic trajectory.
PhaseField gaussian_coherent_state(const GaussianCoherentParams& params, double t, const Grid1D& grid,
                                   const Units& units = {});

}  // namespace phaselab
