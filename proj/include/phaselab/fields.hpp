#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "phaselab/grid.hpp"

namespace phaselab {

using cplx = std::complex<double>;

/// Real distribution f(q,p), row-major: values[i*n_p + l] = f(q_i, p_l).
/// Wigner functions may be negative; `classical` marks fields expected to
/// stay non-negative.
struct PhaseField {
    Grid1D grid;
    std::vector<double> values;
    bool classical = false;

    explicit PhaseField(const Grid1D& g, bool is_classical = false)
        : grid(g), values(g.size(), 0.0), classical(is_classical) {}

    double& at(std::size_t i, std::size_t l) noexcept { return values[i * grid.n_p() + l]; }
    double at(std::size_t i, std::size_t l) const noexcept { return values[i * grid.n_p() + l]; }

    /// dq dp sum of values.
    double mass() const noexcept;
    /// dq dp sum of |values|.
    double abs_mass() const noexcept;
    /// Relative L2 distance ||this - other|| / ||other||.
    double relative_l2(const PhaseField& other) const;
    double l2_norm() const noexcept;
    /// Mass carried by the outer sixteenth of nodes on every side of both axes, relative to abs_mass.
    double tail_fraction() const noexcept;
};

/// f~(q,k), row-major over (q_i, k_j) with k_j = grid.k(j).
struct MomentumFourierField {
    Grid1D grid;
    std::vector<cplx> values;

    explicit MomentumFourierField(const Grid1D& g) : grid(g), values(g.size()) {}

    cplx& at(std::size_t i, std::size_t j) noexcept { return values[i * grid.n_p() + j]; }
    cplx at(std::size_t i, std::size_t j) const noexcept { return values[i * grid.n_p() + j]; }
};

/// psi(q) on the q nodes with its target norm N = dq sum |psi|^2.
struct WaveField {
    Grid1D grid;
    std::vector<cplx> values;
    double norm_target = 1.0;

    explicit WaveField(const Grid1D& g) : grid(g), values(g.n_q()) {}

    double norm() const noexcept;
    /// <this|other> = dq sum conj(this) other.
    cplx inner(const WaveField& other) const;
    void normalize(double target = 1.0);
};

WaveField operator+(const WaveField& a, const WaveField& b);

/// Density n(q) and action S(q) of an action distribution n delta(p - dS/dq).
/// S is defined up to an additive constant.
struct ActionWaveState {
    Grid1D grid;
    std::vector<double> n;
    std::vector<double> S;
    double time = 0.0;

    explicit ActionWaveState(const Grid1D& g) : grid(g), n(g.n_q(), 0.0), S(g.n_q(), 0.0) {}
    double mass() const noexcept;
};

/// rho(a,b) on q nodes, row-major values[a*n_q + b]. Operator products carry a dq weight.
struct DensityMatrixField {
    Grid1D grid;
    std::vector<cplx> values;

    explicit DensityMatrixField(const Grid1D& g) : grid(g), values(g.n_q() * g.n_q()) {}

    cplx& at(std::size_t a, std::size_t b) noexcept { return values[a * grid.n_q() + b]; }
    cplx at(std::size_t a, std::size_t b) const noexcept { return values[a * grid.n_q() + b]; }

    /// dq sum_a rho(a,a) (real part).
    double trace() const noexcept;
    /// Tr rho^2 = dq^2 sum |rho(a,b)|^2.
    double purity() const noexcept;
    /// max |rho(a,b) - conj(rho(b,a))| relative to max |rho|.
    double hermiticity_defect() const noexcept;
    /// Frobenius norm of the off-diagonal part, dq-weighted.
    double coherence_norm() const noexcept;
    /// <p^2> using spectral derivatives along both indices.
    double mean_p2(double sigma) const;
    /// Smallest eigenvalue of the operator (dq-weighted matrix).
    double min_eigenvalue() const;

    static DensityMatrixField pure(const WaveField& psi);
};

}  // namespace phaselab
