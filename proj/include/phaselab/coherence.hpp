#pragma once

#include <vector>

#include "phaselab/fields.hpp"
#include "phaselab/potential.hpp"
#include "phaselab/units.hpp"

namespace phaselab {

/// Residual norm convention recorded in every report header.
inline constexpr const char* kResidualNorm = "relative L2 over the full grid";

struct CoherenceReport {
    std::vector<double> times;
    std::vector<double> residual_norm;   ///< ||W_L - W[psi(t)]|| / ||W[psi(t)]||
    std::vector<double> moyal_estimate;  ///< ||moyal_correction(W[psi(t)])|| / ||W[psi(t)]||
    int potential_degree = 0;
};

struct CoherenceOptions {
    std::size_t sample_every = 0;  ///< steps between samples; 0 picks about 50 samples
    bool fourth_order_tdse = false;
};

/// Evolves W[psi0] with the Liouville solver and psi0 with the TDSE and
/// records their relative L2 distance (t = 0 included).
CoherenceReport coherence_residual(const WaveField& psi0, const PotentialSpec& V, double t_final, double dt,
                                   const Units& units = {}, const CoherenceOptions& options = {});

/// (sigma^2/24) V'''(q) d^3W/dp^3, spectral in k. Degree < 3 gives zero.
PhaseField moyal_correction(const PhaseField& W, const PotentialSpec& V, const Units& units = {});

/// Residual at time t of Liouville-evolved W[psi1 + psi2] against W of the
/// TDSE-evolved sum, cross terms included.
double superposition_check(const WaveField& psi1, const WaveField& psi2, const PotentialSpec& V, double t, double dt,
                           const Units& units = {});

/// W_Liouville(t) - W[psi(t)] for a short evolution, as a field. Used for
/// rate checks against moyal_correction.
PhaseField coherence_gap(const WaveField& psi0, const PotentialSpec& V, double t, double dt, const Units& units = {});

}  // namespace phaselab
