#pragma once

#include <limits>
#include <span>
#include <vector>

#include "phaselab/fields.hpp"
#include "phaselab/potential.hpp"
#include "phaselab/units.hpp"

namespace phaselab {

/// f~(q,k) = sum_l dp exp(i k p_l) f(q,p_l).
MomentumFourierField fourier_momentum(const PhaseField& f);

/// f(q,p) = (1/2pi) sum_j dk exp(-i k_j p) f~(q,k_j); the imaginary part is dropped.
PhaseField inverse_fourier_momentum(const MomentumFourierField& ft);

/// psi(q + sigma k/2) conj(psi(q - sigma k/2)) on the node-exact half shifts,
/// zero outside the grid's Wigner window.
MomentumFourierField wigner_kernel(const WaveField& psi);

/// Wigner function of psi. `sigma` must equal the grid's sigma.
PhaseField wigner(const WaveField& psi, double sigma);

/// Wigner function of an operator from its matrix elements rho(q + sigma k/2, q - sigma k/2).
/// Throws ValidationError if rho is not Hermitian to 1e-10.
PhaseField wigner_of_operator(const DensityMatrixField& rho, double sigma);

/// W(q_i, p) at a single node and arbitrary momentum.
double wigner_at(const WaveField& psi, std::size_t iq, double p);

struct MomentSet {
    std::vector<double> density;  ///< n(q) = int f dp
    std::vector<double> current;  ///< j(q) = int (p/m) f dp
    double mass = 0.0;
    double mean_q = 0.0;
    double mean_p = 0.0;
    double mean_p2 = 0.0;
    double mean_H = 0.0;
};

/// Densities and phase-space averages; the means are normalized by the field's mass.
MomentSet moments(const PhaseField& f, const PotentialSpec& V, const Units& units = {});

/// int int f1 f2 dq dp.
double overlap(const PhaseField& f1, const PhaseField& f2);

/// S = -k_B int (dq dp / h) (h f) ln(h f). Nodes with f <= 0 contribute
/// nothing; a negative mass above 1e-8 is rejected as non-classical input.
double entropy(const PhaseField& f, const Units& units);

/// Relative entropy int f ln(f / g) dq dp (g > 0 everywhere on the grid).
double relative_entropy(const PhaseField& f, const PhaseField& g);

struct CompleteSetSum {
    double value = 0.0;
    std::size_t n_states = 0;
    /// Highest energy in the truncated set, NaN when energies were not supplied.
    double truncation_energy = std::numeric_limits<double>::quiet_NaN();
};

/// Sum over the supplied orthonormal states of W_psi(q,p). q must be a grid node.
CompleteSetSum complete_set_sum(std::span<const WaveField> states, double q, double p, double sigma);

}  // namespace phaselab
