#include "phaselab/thermal.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <string>

#include "phaselab/error.hpp"
#include "phaselab/fft.hpp"
#include "phaselab/transforms.hpp"

namespace phaselab {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CRowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Spectral derivative applied in place to each strided line.
template <class T>
void derive_lines(std::vector<T>& data, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist,
                  double h, int order) {
    std::vector<T> line(n);
    for (std::size_t r = 0; r < howmany; ++r) {
        for (std::size_t m = 0; m < n; ++m) line[m] = data[r * dist + m * stride];
        const auto d = fft::derivative(line, h, order);
        for (std::size_t m = 0; m < n; ++m) data[r * dist + m * stride] = d[m];
    }
}

double l2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

std::vector<double> kinetic_modes(const Grid1D& g, const Units& u) {
    const std::size_t n = g.n_q();
    std::vector<double> t(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double k = fft::wavenumber(m, n, g.dq());
        t[m] = u.sigma * u.sigma * k * k / (2.0 * u.mass);
    }
    return t;
}

// Derivative along a (first index) or b of an n x n row-major matrix, Nyquist dropped.
std::vector<cplx> index_derivative(const std::vector<cplx>& op, std::size_t n, double h, bool along_a) {
    std::vector<cplx> w = op;
    const std::size_t stride = along_a ? n : 1, dist = along_a ? 1 : n;
    fft::c2c(w.data(), n, n, stride, dist, -1);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t m = 0; m < n; ++m) {
            const double k = (2 * m == n) ? 0.0 : fft::wavenumber(m, n, h);
            w[r * dist + m * stride] *= cplx(0.0, k * inv);
        }
    fft::c2c(w.data(), n, n, stride, dist, +1);
    return w;
}

template <class Rate>
void rk4(std::vector<cplx>& y, double tau, std::size_t substeps, const Rate& rate) {
    const double h = tau / static_cast<double>(substeps);
    const std::size_t n = y.size();
    std::vector<cplx> tmp(n);
    for (std::size_t s = 0; s < substeps; ++s) {
        const auto k1 = rate(y);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        const auto k2 = rate(tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        const auto k3 = rate(tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        const auto k4 = rate(tmp);
        for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

std::size_t substeps_for(double tau, double stiffness) {
    // RK4 is stable out to about 2.8 on both axes; keep a margin.
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tau * stiffness / 2.0)));
}

void check_density(const DensityMatrixField& rho, const Grid1D& grid, const char* who) {
    if (!rho.grid.compatible(grid)) throw ValidationError(std::string(who) + ": grid mismatch");
    if (rho.hermiticity_defect() > 1e-10) throw ValidationError(std::string(who) + ": operator is not Hermitian");
}

}  // namespace

// ---------------------------------------------------------------- classical FP

FokkerPlanckSolver::FokkerPlanckSolver(const Grid1D& grid, const PotentialSpec& V, const ThermalParams& tp,
                                       const Units& units)
    : grid_(grid), tp_(tp), units_(units), liouville_(grid, V, units) {
    units.validate();
    if (!(tp.gamma >= 0.0) || !(tp.beta > 0.0)) throw ValidationError("fokker_planck: bad thermal parameters");
}

const std::vector<double>& FokkerPlanckSolver::propagator(double tau) {
    auto it = cache_.find(tau);
    if (it != cache_.end()) return it->second;
    const std::size_t n = grid_.n_p();
    const auto N = static_cast<Eigen::Index>(n);
    RowMatrix D(N, N);
    std::vector<double> e(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        std::fill(e.begin(), e.end(), 0.0);
        e[c] = 1.0;
        const auto col = fft::derivative(e, grid_.dp(), 1);
        for (std::size_t r = 0; r < n; ++r) D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
    }
    Eigen::VectorXd p(N);
    for (std::size_t l = 0; l < n; ++l) p(static_cast<Eigen::Index>(l)) = grid_.p(l);
    const RowMatrix gen = (tp_.gamma / units_.mass) * (D * p.asDiagonal()) + (tp_.gamma * tp_.kT()) * (D * D);
    const RowMatrix P = (gen * tau).exp();
    std::vector<double> flat(P.data(), P.data() + n * n);
    return cache_.emplace(tau, std::move(flat)).first->second;
}

void FokkerPlanckSolver::collide(PhaseField& f, double tau) {
    const auto nq = static_cast<Eigen::Index>(grid_.n_q()), np = static_cast<Eigen::Index>(grid_.n_p());
    const auto& P = propagator(tau);
    Eigen::Map<const RowMatrix> Pm(P.data(), np, np);
    Eigen::Map<RowMatrix> F(f.values.data(), nq, np);
    F = (F * Pm.transpose()).eval();
}

void FokkerPlanckSolver::step(PhaseField& f, double dt) { advance(f, dt, 1); }

void FokkerPlanckSolver::advance(PhaseField& f, double dt, std::size_t steps) {
    if (!f.grid.compatible(grid_)) throw ValidationError("fokker_planck: field grid differs from solver grid");
    for (std::size_t s = 0; s < steps; ++s) {
        liouville_.advance(f, 0.5 * dt, 1);
        collide(f, dt);
        liouville_.advance(f, 0.5 * dt, 1);
    }
    const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
    if (*lo < -negativity_tolerance * std::max(*hi, 0.0))
        throw SolverError("fokker_planck: density went negative (" + std::to_string(*lo) + ")");
}

PhaseField fokker_planck_step(const PhaseField& f, const PotentialSpec& V, const ThermalParams& tp, double dt,
                              const Units& units) {
    PhaseField out = f;
    FokkerPlanckSolver(f.grid, V, tp, units).step(out, dt);
    return out;
}

PhaseField boltzmann_equilibrium(const PotentialSpec& V, double beta, const Grid1D& grid, const Units& units) {
    units.validate();
    if (!(beta > 0.0)) throw ValidationError("boltzmann: beta must be positive");
    if (V.is_polynomial()) {
        const int d = V.degree();
        const double lead = V.coefficients()[static_cast<std::size_t>(std::max(d, 0))];
        if (d % 2 == 1 || (d > 0 && lead < 0.0))
            throw ValidationError("boltzmann: potential is unbounded below; exp(-beta H) is not normalizable");
    }
    const auto pot = evaluate_potential(V, grid);
    const double vmin = *std::min_element(pot.begin(), pot.end());
    PhaseField f(grid, true);
    for (std::size_t i = 0; i < grid.n_q(); ++i)
        for (std::size_t l = 0; l < grid.n_p(); ++l) {
            const double p = grid.p(l);
            f.at(i, l) = std::exp(-beta * (p * p / (2.0 * units.mass) + pot[i] - vmin));
        }
    const double z = f.mass();
    for (auto& v : f.values) v /= z;
    const double tail = f.tail_fraction();
    if (tail > 1e-8)
        throw ValidationError("boltzmann: " + std::to_string(tail) +
                              " of the mass sits in the grid's outer band; widen the grid");
    return f;
}

FourierIdentity fp_fourier_identity(const PhaseField& f, const PotentialSpec& V, const ThermalParams& tp,
                                    const Units& units) {
    const Grid1D& g = f.grid;
    const std::size_t nq = g.n_q(), np = g.n_p();
    const auto dV = potential_derivative(V, g, 1);
    const double m = units.mass, gamma = tp.gamma, kT = tp.kT();

    // Phase-space side.
    std::vector<double> fq = f.values, fp = f.values, pf(f.values.size()), fpp = f.values;
    derive_lines(fq, nq, np, np, 1, g.dq(), 1);
    derive_lines(fp, np, nq, 1, np, g.dp(), 1);
    derive_lines(fpp, np, nq, 1, np, g.dp(), 2);
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t l = 0; l < np; ++l) pf[i * np + l] = g.p(l) * f.at(i, l);
    derive_lines(pf, np, nq, 1, np, g.dp(), 1);
    PhaseField rate(g);
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t l = 0; l < np; ++l) {
            const std::size_t x = i * np + l;
            rate.values[x] = -g.p(l) / m * fq[x] + dV[i] * fp[x] + gamma * (pf[x] / m + kT * fpp[x]);
        }
    const auto lhs = fourier_momentum(rate);

    // Transformed equation acting on f~.
    const auto ft = fourier_momentum(f);
    std::vector<cplx> dk = ft.values, dqk = ft.values;
    derive_lines(dk, np, nq, 1, np, g.dk(), 1);
    dqk = dk;
    derive_lines(dqk, nq, np, np, 1, g.dq(), 1);
    std::vector<cplx> rhs(ft.values.size());
    const cplx I(0.0, 1.0);
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < np; ++j) {
            const std::size_t x = i * np + j;
            const double k = g.k(j);
            rhs[x] = I / m * dqk[x] - I * k * dV[i] * ft.values[x] - gamma / m * k * dk[x] -
                     gamma * kT * k * k * ft.values[x];
        }

    FourierIdentity out;
    out.lhs_norm = l2(lhs.values);
    out.rhs_norm = l2(rhs);
    std::vector<cplx> diff(rhs.size());
    for (std::size_t x = 0; x < rhs.size(); ++x) diff[x] = lhs.values[x] - rhs[x];
    const double scale = std::max(out.lhs_norm, out.rhs_norm);
    out.residual = scale > 0.0 ? l2(diff) / scale : 0.0;
    return out;
}

double fp_fourier_residual(const PhaseField& f, const PotentialSpec& V, const ThermalParams& tp, const Units& units) {
    return fp_fourier_identity(f, V, tp, units).residual;
}

// ---------------------------------------------------------------- quantum FP

QuantumFokkerPlanck::QuantumFokkerPlanck(const Grid1D& grid, const PotentialSpec& V, const ThermalParams& tp,
                                         const Units& units)
    : grid_(grid), tp_(tp), units_(units), V_(evaluate_potential(V, grid)), kinetic_(kinetic_modes(grid, units)) {
    units.validate();
    const std::size_t n = grid.n_q();
    x_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t d = (a + n - b) % n;
            x_[a * n + b] = (2 * d == n) ? 0.0 : grid.q_difference(a, b);
        }
    const double xmax = 0.5 * grid.length(), kmax = kPi / grid.dq();
    stiffness_ = tp.gamma / units.mass * xmax * kmax + tp.gamma * tp.kT() * xmax * xmax / (units.sigma * units.sigma);
}

void QuantumFokkerPlanck::unitary(std::vector<cplx>& rho, double tau) const {
    // same half kinetic / potential / half kinetic order as the TDSE
    const std::size_t n = grid_.n_q();
    const double s = units_.sigma;
    const double inv = 1.0 / static_cast<double>(n * n);
    auto half_kinetic = [&] {
        fft::c2c(rho.data(), n, n, n, 1, -1);
        fft::c2c(rho.data(), n, n, 1, n, -1);
        for (std::size_t ma = 0; ma < n; ++ma)
            for (std::size_t mb = 0; mb < n; ++mb)
                rho[ma * n + mb] *= std::polar(inv, -0.5 * (kinetic_[ma] - kinetic_[mb]) * tau / s);
        fft::c2c(rho.data(), n, n, 1, n, +1);
        fft::c2c(rho.data(), n, n, n, 1, +1);
    };
    half_kinetic();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) rho[a * n + b] *= std::polar(1.0, -(V_[a] - V_[b]) * tau / s);
    half_kinetic();
}

std::vector<cplx> QuantumFokkerPlanck::friction_rate(const std::vector<cplx>& op) const {
    const std::size_t n = grid_.n_q();
    auto da = index_derivative(op, n, grid_.dq(), true);
    const auto db = index_derivative(op, n, grid_.dq(), false);
    const double c = -tp_.gamma / (2.0 * units_.mass);
    for (std::size_t x = 0; x < n * n; ++x) da[x] = c * x_[x] * (da[x] - db[x]);
    return da;
}

void QuantumFokkerPlanck::friction(std::vector<cplx>& rho, double tau) const {
    if (tp_.gamma == 0.0) return;
    const double xmax = 0.5 * grid_.length(), kmax = kPi / grid_.dq();
    const double stiff = tp_.gamma / units_.mass * xmax * kmax;
    rk4(rho, tau, substeps_for(tau, stiff), [&](const std::vector<cplx>& y) { return friction_rate(y); });
}

void QuantumFokkerPlanck::decohere(std::vector<cplx>& rho, double tau) const {
    const double c = tp_.gamma * tp_.kT() * tau / (units_.sigma * units_.sigma);
    for (std::size_t x = 0; x < rho.size(); ++x) rho[x] *= std::exp(-c * x_[x] * x_[x]);
}

void QuantumFokkerPlanck::step(DensityMatrixField& rho, double dt) const { advance(rho, dt, 1); }

void QuantumFokkerPlanck::advance(DensityMatrixField& rho, double dt, std::size_t steps) const {
    check_density(rho, grid_, "qfp");
    for (std::size_t s = 0; s < steps; ++s) {
        const double before = rho.trace();
        unitary(rho.values, 0.5 * dt);
        friction(rho.values, 0.5 * dt);
        decohere(rho.values, dt);
        friction(rho.values, 0.5 * dt);
        unitary(rho.values, 0.5 * dt);
        const double after = rho.trace();
        if (std::abs(after - before) > 1e-8 * std::max(1.0, std::abs(before)))
            throw SolverError("qfp: trace drifted from " + std::to_string(before) + " to " + std::to_string(after));
    }
}

DensityMatrixField qfp_step(const DensityMatrixField& rho, const PotentialSpec& V, const ThermalParams& tp, double dt,
                            const Units& units) {
    DensityMatrixField out = rho;
    QuantumFokkerPlanck(rho.grid, V, tp, units).step(out, dt);
    return out;
}

std::vector<Occupation> occupations(const QuantumEqParams& params, const Grid1D& grid, const Units& units) {
    units.validate();
    if (!(params.beta > 0.0)) throw ValidationError("quantum_equilibrium: beta must be positive");
    const bool bose = params.statistics == Statistics::bose;
    if (bose && !(params.alpha > 0.0))
        throw ValidationError("quantum_equilibrium: bose occupation diverges at E = 0 unless alpha > 0");
    const std::size_t n = grid.n_q();
    std::vector<Occupation> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double k = fft::wavenumber(m, n, grid.dq());
        const double e = units.sigma * units.sigma * k * k / (2.0 * units.mass);
        const double x = params.beta * e + params.alpha;
        // exp(x) -/+ 1 written to stay accurate for large x
        const double g = bose ? 1.0 / std::expm1(x) : 1.0 / (std::exp(x) + 1.0);
        out[m] = {k, e, g};
    }
    return out;
}

DensityMatrixField quantum_equilibrium(const QuantumEqParams& params, const Units& units, const Grid1D& grid) {
    if (std::abs(grid.sigma() - units.sigma) > 1e-12 * units.sigma)
        throw ValidationError("quantum_equilibrium: grid sigma disagrees with units");
    const auto occ = occupations(params, grid, units);
    const std::size_t n = grid.n_q();
    std::vector<cplx> c(n);
    for (std::size_t m = 0; m < n; ++m) c[m] = occ[m].value;
    fft::c2c(c.data(), n, 1, 1, n, +1);  // c(d) = sum_m g_m exp(i kappa_m d dq)
    DensityMatrixField rho(grid);
    const double inv_l = 1.0 / grid.length();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t d = (a + n - b) % n;
            rho.at(a, b) = c[d] * inv_l;
        }
    return rho;
}

DensityMatrixField nonlinear_qfp_step(const DensityMatrixField& f, const ThermalParams& tp, double dt,
                                      Statistics statistics, const Units& units) {
    const Grid1D& g = f.grid;
    QuantumFokkerPlanck solver(g, PotentialSpec::free(), tp, units);
    check_density(f, g, "nonlinear_qfp");
    const std::size_t n = g.n_q();
    const auto N = static_cast<Eigen::Index>(n);
    const double sign = statistics == Statistics::fermi ? -1.0 : 1.0;
    const double dq = g.dq();
    const double dcoef = tp.gamma * tp.kT() / (units.sigma * units.sigma);
    std::vector<double> x2(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const double x = g.q_difference(a, b);
            x2[a * n + b] = ((2 * ((a + n - b) % n) == n) ? 0.0 : x * x);
        }

    auto rate = [&](const std::vector<cplx>& y) {
        std::vector<cplx> operand(n * n);
        Eigen::Map<const CRowMatrix> Y(y.data(), N, N);
        Eigen::Map<CRowMatrix> O(operand.data(), N, N);
        O = Y + (sign * dq) * (Y * Y);
        auto r = solver.friction_rate(operand);
        for (std::size_t x = 0; x < n * n; ++x) r[x] -= dcoef * x2[x] * y[x];
        return r;
    };

    DensityMatrixField out = f;
    solver.unitary(out.values, 0.5 * dt);
    rk4(out.values, dt, substeps_for(dt, solver.stiffness()), rate);
    solver.unitary(out.values, 0.5 * dt);

    if (statistics == Statistics::fermi) {
        Eigen::MatrixXcd m(N, N);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    0.5 * (out.at(a, b) + std::conj(out.at(b, a))) * dq;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(N - 1);
        if (lo < -1e-8 || hi > 1.0 + 1e-8)
            throw SolverError("nonlinear_qfp: fermi occupations left [0, 1] (range " + std::to_string(lo) + ", " +
                              std::to_string(hi) + ")");
    }
    return out;
}

}  // namespace phaselab
