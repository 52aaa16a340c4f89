#include "phaselab/quantum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "phaselab/error.hpp"
#include "phaselab/fft.hpp"

namespace phaselab {
namespace {

std::vector<double> kinetic_spectrum(const Grid1D& g, const Units& u) {
    const std::size_t n = g.n_q();
    std::vector<double> t(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double k = fft::wavenumber(m, n, g.dq());
        t[m] = u.sigma * u.sigma * k * k / (2.0 * u.mass);
    }
    return t;
}

void require_units(const Units& u) { u.validate(); }

}  // namespace

TdseSolver::TdseSolver(const Grid1D& grid, const PotentialSpec& V, const Units& units, bool fourth_order)
    : grid_(grid),
      units_(units),
      fourth_order_(fourth_order),
      V_(evaluate_potential(V, grid)),
      dV_(potential_derivative(V, grid, 1)),
      kinetic_(kinetic_spectrum(grid, units)) {
    require_units(units);
}

void TdseSolver::check_step(const WaveField& psi, double dt) const {
    double peak = 0.0;
    for (const auto& v : psi.values) peak = std::max(peak, std::norm(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < psi.values.size(); ++i)
        if (std::norm(psi.values[i]) > 1e-24 * peak) worst = std::max(worst, std::abs(dV_[i]));
    const double wrap = dt * worst * grid_.dq() / units_.sigma;
    if (wrap > 0.5 * kPi)
        throw StepRejected("tdse: potential phase advances " + std::to_string(wrap) + " rad between nodes",
                           0.25 * kPi * units_.sigma / (worst * grid_.dq()));
}

void TdseSolver::strang(std::vector<cplx>& v, double dt) const {
    // half kinetic, potential, half kinetic: the same ordering as the Liouville
    // drift-kick-drift, so both propagators agree exactly for quadratic V.
    const std::size_t n = v.size();
    const double s = units_.sigma;
    const double inv = 1.0 / static_cast<double>(n);
    auto half_kinetic = [&] {
        fft::c2c(v.data(), n, 1, 1, n, -1);
        for (std::size_t m = 0; m < n; ++m) v[m] *= std::polar(inv, -0.5 * kinetic_[m] * dt / s);
        fft::c2c(v.data(), n, 1, 1, n, +1);
    };
    half_kinetic();
    for (std::size_t i = 0; i < n; ++i) v[i] *= std::polar(1.0, -V_[i] * dt / s);
    half_kinetic();
}

void TdseSolver::step(WaveField& psi, double dt) const { advance(psi, dt, 1); }

void TdseSolver::advance(WaveField& psi, double dt, std::size_t steps) const {
    if (!psi.grid.compatible(grid_)) throw ValidationError("tdse: wave field grid differs from solver grid");
    check_step(psi, dt);
    if (!fourth_order_) {
        for (std::size_t s = 0; s < steps; ++s) strang(psi.values, dt);
        return;
    }
    const double c = std::cbrt(2.0);
    const double w1 = 1.0 / (2.0 - c), w0 = -c / (2.0 - c);
    for (std::size_t s = 0; s < steps; ++s) {
        strang(psi.values, w1 * dt);
        strang(psi.values, w0 * dt);
        strang(psi.values, w1 * dt);
    }
}

WaveField tdse_step(const WaveField& psi, const PotentialSpec& V, double dt, const Units& units) {
    WaveField out = psi;
    TdseSolver(psi.grid, V, units).step(out, dt);
    return out;
}

WaveField apply_hamiltonian(const WaveField& psi, const PotentialSpec& V, const Units& units) {
    const Grid1D& g = psi.grid;
    const std::size_t n = g.n_q();
    const auto t = kinetic_spectrum(g, units);
    const auto pot = evaluate_potential(V, g);
    WaveField out = psi;
    fft::c2c(out.values.data(), n, 1, 1, n, -1);
    for (std::size_t m = 0; m < n; ++m) out.values[m] *= t[m] / static_cast<double>(n);
    fft::c2c(out.values.data(), n, 1, 1, n, +1);
    for (std::size_t i = 0; i < n; ++i) out.values[i] += pot[i] * psi.values[i];
    return out;
}

double energy_expectation(const WaveField& psi, const PotentialSpec& V, const Units& units) {
    const auto hpsi = apply_hamiltonian(psi, V, units);
    return psi.inner(hpsi).real() / psi.norm();
}

std::vector<EigenPair> stationary_states(const PotentialSpec& V, const Grid1D& grid, std::size_t count,
                                         const Units& units) {
    require_units(units);
    const std::size_t n = grid.n_q();
    if (count == 0) return {};
    if (count > n / 4)
        throw ValidationError("stationary_states: " + std::to_string(count) + " states requested on " +
                              std::to_string(n) + " nodes; need count <= n_q/4");
    // Circulant kinetic matrix t(a - b) from the spectral kinetic energies.
    const auto spec = kinetic_spectrum(grid, units);
    std::vector<cplx> row(spec.begin(), spec.end());
    fft::c2c(row.data(), n, 1, 1, n, +1);
    const auto pot = evaluate_potential(V, grid);
    Eigen::MatrixXd H(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t d = (a + n - b) % n;
            H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = row[d].real() / static_cast<double>(n);
        }
    for (std::size_t a = 0; a < n; ++a) H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) += pot[a];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw SolverError("stationary_states: eigensolver did not converge");

    std::vector<EigenPair> out;
    out.reserve(count);
    const double inv_sqrt_dq = 1.0 / std::sqrt(grid.dq());
    for (std::size_t k = 0; k < count; ++k) {
        const auto vec = es.eigenvectors().col(static_cast<Eigen::Index>(k));
        Eigen::Index imax = 0;
        vec.cwiseAbs().maxCoeff(&imax);
        const double sign = vec(imax) < 0.0 ? -1.0 : 1.0;
        EigenPair ep{es.eigenvalues()(static_cast<Eigen::Index>(k)), WaveField(grid)};
        for (std::size_t i = 0; i < n; ++i) ep.state.values[i] = sign * vec(static_cast<Eigen::Index>(i)) * inv_sqrt_dq;
        out.push_back(std::move(ep));
    }
    return out;
}

WaveField glauber_wavefunction(const GaussianCoherentParams& params, const Grid1D& grid, const Units& units) {
    require_units(units);
    if (!(params.a > 0.0 && params.b > 0.0)) throw ValidationError("glauber: widths must be positive");
    if (std::abs(params.effective_sigma() - units.sigma) > 1e-12 * units.sigma)
        throw ValidationError("glauber: sqrt(ab) = " + std::to_string(params.effective_sigma()) +
                              " disagrees with sigma = " + std::to_string(units.sigma));
    if (params.coherence_defect(units) > 1e-12)
        throw ValidationError("glauber: coherence condition b/a = m^2 omega^2 violated");
    if (std::abs(grid.sigma() - units.sigma) > 1e-12 * units.sigma)
        throw ValidationError("glauber: grid sigma disagrees with units");
    WaveField psi(grid);
    const double amp = std::pow(kPi * params.a, -0.25);
    for (std::size_t i = 0; i < grid.n_q(); ++i) {
        const double q = grid.q(i), d = q - params.X;
        psi.values[i] = std::polar(amp * std::exp(-d * d / (2.0 * params.a)), q * params.Y / units.sigma);
    }
    psi.normalize(1.0);
    return psi;
}

}  // namespace phaselab
