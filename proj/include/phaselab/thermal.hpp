#pragma once

#include <map>
#include <vector>

#include "phaselab/classical.hpp"
#include "phaselab/fields.hpp"
#include "phaselab/potential.hpp"
#include "phaselab/units.hpp"

namespace phaselab {

/// Classical Fokker-Planck propagator
///   df/dt + (p/m) df/dq - V' df/dp = gamma d/dp (p/m + (1/beta) d/dp) f.
/// Strang split: Liouville half step, exact friction-diffusion step on every
/// momentum line (matrix exponential of the spectral generator), Liouville
/// half step.
class FokkerPlanckSolver {
public:
    FokkerPlanckSolver(const Grid1D& grid, const PotentialSpec& V, const ThermalParams& tp, const Units& units);

    void step(PhaseField& f, double dt);
    void advance(PhaseField& f, double dt, std::size_t steps);

    /// Friction-diffusion part alone over time tau.
    void collide(PhaseField& f, double tau);

    /// Minimum allowed f relative to the field's peak before a step is rejected.
    double negativity_tolerance = 1e-10;

private:
    const std::vector<double>& propagator(double tau);

    Grid1D grid_;
    ThermalParams tp_;
    Units units_;
    LiouvilleSolver liouville_;
    std::map<double, std::vector<double>> cache_;  // row-major n_p x n_p
};

PhaseField fokker_planck_step(const PhaseField& f, const PotentialSpec& V, const ThermalParams& tp, double dt,
                              const Units& units = {});

/// exp(-beta H) / Z normalized to unit mass on the grid. Throws when the
/// outer band of the grid carries more than 1e-8 of the mass.
PhaseField boltzmann_equilibrium(const PotentialSpec& V, double beta, const Grid1D& grid, const Units& units = {});

struct FourierIdentity {
    double lhs_norm = 0.0;  ///< || F[df/dt] ||, df/dt from the phase-space equation
    double rhs_norm = 0.0;  ///< || transformed equation applied to f~ ||
    double residual = 0.0;  ///< || lhs - rhs || / max(lhs_norm, rhs_norm)
};

/// Checks that the momentum-Fourier form of the Fokker-Planck equation
///   df~/dt = (i/m) d_k d_q f~ - i k V' f~ - (gamma/m) k d_k f~ - gamma kT k^2 f~
/// agrees with the transform of df/dt computed in phase space.
FourierIdentity fp_fourier_identity(const PhaseField& f, const PotentialSpec& V, const ThermalParams& tp,
                                    const Units& units = {});
double fp_fourier_residual(const PhaseField& f, const PotentialSpec& V, const ThermalParams& tp,
                           const Units& units = {});

/// Quantum Fokker-Planck (Caldeira-Leggett form) on rho(a,b), hbar = sigma:
///   drho/dt = -(i/hbar)[H,rho] - (gamma/2m) x (d_a - d_b) rho - (gamma kT/hbar^2) x^2 rho
/// with x = a - b (minimum image). Step: U(dt/2) F(dt/2) D(dt) F(dt/2) U(dt/2),
/// U split-operator on both indices, F friction by RK4, D exact per element.
class QuantumFokkerPlanck {
public:
    QuantumFokkerPlanck(const Grid1D& grid, const PotentialSpec& V, const ThermalParams& tp, const Units& units);

    void step(DensityMatrixField& rho, double dt) const;
    void advance(DensityMatrixField& rho, double dt, std::size_t steps) const;

    void unitary(std::vector<cplx>& rho, double tau) const;
    void friction(std::vector<cplx>& rho, double tau) const;
    void decohere(std::vector<cplx>& rho, double tau) const;

    /// -(gamma/2m) x (d_a - d_b) applied to `op`.
    std::vector<cplx> friction_rate(const std::vector<cplx>& op) const;
    /// Largest rate of the dissipative generator, used to sub-cycle RK4.
    double stiffness() const noexcept { return stiffness_; }

    const Grid1D& grid() const noexcept { return grid_; }
    const ThermalParams& thermal() const noexcept { return tp_; }

private:
    Grid1D grid_;
    ThermalParams tp_;
    Units units_;
    std::vector<double> V_;
    std::vector<double> kinetic_;
    std::vector<double> x_;  // minimum-image a - b, zero at the half-box separation
    double stiffness_ = 0.0;
};

DensityMatrixField qfp_step(const DensityMatrixField& rho, const PotentialSpec& V, const ThermalParams& tp, double dt,
                            const Units& units = {});

enum class Statistics { fermi, bose };

struct QuantumEqParams {
    double alpha = 0.0;
    Statistics statistics = Statistics::fermi;
    double beta = 1.0;
};

struct Occupation {
    double kappa = 0.0;
    double energy = 0.0;
    double value = 0.0;
};

/// 1/(exp(beta E + alpha) +/- 1) for the plane waves of the periodic box.
std::vector<Occupation> occupations(const QuantumEqParams& params, const Grid1D& grid, const Units& units = {});

/// Free-particle equilibrium operator in the position basis,
/// rho(a,b) = (1/L) sum_j g_j exp(i kappa_j (q_a - q_b)); trace = sum_j g_j.
DensityMatrixField quantum_equilibrium(const QuantumEqParams& params, const Units& units, const Grid1D& grid);

/// Free-particle step of the nonlinear equation whose friction operand is
/// f(1 - f) (fermi) or f(1 + f) (bose), products dq-weighted.
DensityMatrixField nonlinear_qfp_step(const DensityMatrixField& f, const ThermalParams& tp, double dt,
                                      Statistics statistics, const Units& units = {});

}  // namespace phaselab
