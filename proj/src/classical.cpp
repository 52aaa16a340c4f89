#include "phaselab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phaselab/error.hpp"
#include "phaselab/fft.hpp"

namespace phaselab {

TrajectoryState TrajectoryState::evolved(double omega, double t, const Units& units) const noexcept {
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    const double mw = units.mass * omega;
    return {X * c + Y / mw * s, Y * c - mw * X * s};
}

LiouvilleSolver::LiouvilleSolver(const Grid1D& grid, const PotentialSpec& V, const Units& units)
    : grid_(grid), units_(units), dV_(potential_derivative(V, grid, 1)) {}

void LiouvilleSolver::drift(PhaseField& f, double tau) const {
    const std::size_t nq = grid_.n_q(), np = grid_.n_p();
    const double scale = tau / units_.mass;
    fft::shift_real_lines(f.values.data(), nq, np, np, 1, grid_.dq(),
                          [&](std::size_t l) { return grid_.p(l) * scale; });
}

void LiouvilleSolver::kick(PhaseField& f, double tau) const {
    const std::size_t nq = grid_.n_q(), np = grid_.n_p();
    // f(q, p) <- f(q, p + V'(q) tau)
    fft::shift_real_lines(f.values.data(), np, nq, 1, np, grid_.dp(), [&](std::size_t i) { return -dV_[i] * tau; });
}

void LiouvilleSolver::check_step(const PhaseField& f, double dt) const {
    const std::size_t nq = grid_.n_q(), np = grid_.n_p();
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, std::abs(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        double row = 0.0;
        for (std::size_t l = 0; l < np; ++l) row = std::max(row, std::abs(f.at(i, l)));
        if (row > 1e-8 * peak) worst = std::max(worst, std::abs(dV_[i]));
    }
    const double courant = dt * worst / grid_.dp();
    if (courant > 1.0) {
        throw StepRejected("liouville: kick moves " + std::to_string(courant) + " momentum cells per step",
                           0.5 * grid_.dp() / worst);
    }
}

void LiouvilleSolver::step(PhaseField& f, double dt) const { advance(f, dt, 1); }

void LiouvilleSolver::advance(PhaseField& f, double dt, std::size_t steps) const {
    if (steps == 0) return;
    if (!f.grid.compatible(grid_)) throw ValidationError("liouville: field grid differs from solver grid");
    check_step(f, dt);
    drift(f, 0.5 * dt);
    for (std::size_t s = 0; s < steps; ++s) {
        kick(f, dt);
        drift(f, s + 1 == steps ? 0.5 * dt : dt);
    }
}

PhaseField liouville_step(const PhaseField& f, const PotentialSpec& V, double dt, const Units& units) {
    PhaseField out = f;
    LiouvilleSolver(f.grid, V, units).step(out, dt);
    return out;
}

namespace {

std::vector<double> first_difference(const std::vector<double>& s, double h) {
    const std::size_t n = s.size();
    if (n < 6) throw ValidationError("action wave: need at least 6 q nodes");
    std::vector<double> d(n);
    const double c = 1.0 / (12.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (s[i - 2] - 8.0 * s[i - 1] + 8.0 * s[i + 1] - s[i + 2]) * c;
    d[0] = (-25.0 * s[0] + 48.0 * s[1] - 36.0 * s[2] + 16.0 * s[3] - 3.0 * s[4]) * c;
    d[1] = (-3.0 * s[0] - 10.0 * s[1] + 18.0 * s[2] - 6.0 * s[3] + s[4]) * c;
    const std::size_t m = n - 1;
    d[m] = (25.0 * s[m] - 48.0 * s[m - 1] + 36.0 * s[m - 2] - 16.0 * s[m - 3] + 3.0 * s[m - 4]) * c;
    d[m - 1] = (3.0 * s[m] + 10.0 * s[m - 1] - 18.0 * s[m - 2] + 6.0 * s[m - 3] - s[m - 4]) * c;
    return d;
}

std::vector<double> second_difference(const std::vector<double>& s, double h) {
    const std::size_t n = s.size();
    if (n < 6) throw ValidationError("action wave: need at least 6 q nodes");
    std::vector<double> d(n);
    const double c = 1.0 / (12.0 * h * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (-s[i - 2] + 16.0 * s[i - 1] - 30.0 * s[i] + 16.0 * s[i + 1] - s[i + 2]) * c;
    d[0] = (45.0 * s[0] - 154.0 * s[1] + 214.0 * s[2] - 156.0 * s[3] + 61.0 * s[4] - 10.0 * s[5]) * c;
    d[1] = (10.0 * s[0] - 15.0 * s[1] - 4.0 * s[2] + 14.0 * s[3] - 6.0 * s[4] + s[5]) * c;
    const std::size_t m = n - 1;
    d[m] = (45.0 * s[m] - 154.0 * s[m - 1] + 214.0 * s[m - 2] - 156.0 * s[m - 3] + 61.0 * s[m - 4] - 10.0 * s[m - 5]) * c;
    d[m - 1] = (10.0 * s[m] - 15.0 * s[m - 1] - 4.0 * s[m - 2] + 14.0 * s[m - 3] - 6.0 * s[m - 4] + s[m - 5]) * c;
    return d;
}

struct ActionRate {
    std::vector<double> dn;
    std::vector<double> dS;
};

ActionRate action_rate(const std::vector<double>& n, const std::vector<double>& S, const std::vector<double>& V,
                       double h, double mass) {
    const std::size_t N = n.size();
    const auto u = first_difference(S, h);
    std::vector<double> flux(N);
    ActionRate r{std::vector<double>(N), std::vector<double>(N)};
    for (std::size_t i = 0; i < N; ++i) {
        flux[i] = n[i] * u[i] / mass;
        r.dS[i] = -u[i] * u[i] / (2.0 * mass) - V[i];
    }
    const auto div = fft::derivative(flux, h, 1);
    for (std::size_t i = 0; i < N; ++i) r.dn[i] = -div[i];
    return r;
}

}  // namespace

std::vector<double> action_gradient(const ActionWaveState& state) { return first_difference(state.S, state.grid.dq()); }

std::vector<double> action_curvature(const ActionWaveState& state) {
    return second_difference(state.S, state.grid.dq());
}

ActionWaveState action_wave_step(const ActionWaveState& state, const PotentialSpec& V, double dt, const Units& units,
                                 double caustic_threshold) {
    const std::size_t N = state.grid.n_q();
    const double h = state.grid.dq();
    const double nmax = *std::max_element(state.n.begin(), state.n.end());
    const auto curv = action_curvature(state);
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        if (state.n[i] > 1e-12 * nmax) worst = std::max(worst, std::abs(curv[i]));
    if (worst * dt / units.mass >= caustic_threshold)
        throw CausticError("action wave: caustic at t = " + std::to_string(state.time) +
                               " (multi-valued S is not represented)",
                           state.time);

    const auto pot = evaluate_potential(V, state.grid);
    auto axpy = [&](const std::vector<double>& x, const std::vector<double>& y, double a) {
        std::vector<double> z(N);
        for (std::size_t i = 0; i < N; ++i) z[i] = x[i] + a * y[i];
        return z;
    };
    const auto k1 = action_rate(state.n, state.S, pot, h, units.mass);
    const auto k2 = action_rate(axpy(state.n, k1.dn, 0.5 * dt), axpy(state.S, k1.dS, 0.5 * dt), pot, h, units.mass);
    const auto k3 = action_rate(axpy(state.n, k2.dn, 0.5 * dt), axpy(state.S, k2.dS, 0.5 * dt), pot, h, units.mass);
    const auto k4 = action_rate(axpy(state.n, k3.dn, dt), axpy(state.S, k3.dS, dt), pot, h, units.mass);

    ActionWaveState out = state;
    for (std::size_t i = 0; i < N; ++i) {
        out.n[i] += dt / 6.0 * (k1.dn[i] + 2.0 * k2.dn[i] + 2.0 * k3.dn[i] + k4.dn[i]);
        out.S[i] += dt / 6.0 * (k1.dS[i] + 2.0 * k2.dS[i] + 2.0 * k3.dS[i] + k4.dS[i]);
    }
    out.time = state.time + dt;
    const double new_max = *std::max_element(out.n.begin(), out.n.end());
    const double new_min = *std::min_element(out.n.begin(), out.n.end());
    if (new_min < -1e-10 * new_max)
        throw SolverError("action wave: density went negative (" + std::to_string(new_min) + ")");
    return out;
}

PhaseField embed_action_wave(const ActionWaveState& state, double width_b) {
    const Grid1D& g = state.grid;
    if (!(width_b > 0.0)) throw ValidationError("embed_action_wave: width must be positive");
    if (width_b < 4.0 * g.dp() * g.dp())
        throw ValidationError("embed_action_wave: width " + std::to_string(width_b) +
                              " is below 4 dp^2; kernel under-resolved");
    const auto u = action_gradient(state);
    PhaseField f(g, true);
    const double norm = 1.0 / std::sqrt(kPi * width_b);
    for (std::size_t i = 0; i < g.n_q(); ++i)
        for (std::size_t l = 0; l < g.n_p(); ++l) {
            const double d = g.p(l) - u[i];
            f.at(i, l) = state.n[i] * norm * std::exp(-d * d / width_b);
        }
    return f;
}

PhaseField gaussian_coherent_state(const GaussianCoherentParams& params, double t, const Grid1D& grid,
                                   const Units& units) {
    if (!(params.a > 0.0 && params.b > 0.0)) throw ValidationError("gaussian state: widths must be positive");
    if (params.coherence_defect(units) > 1e-12)
        throw ValidationError("gaussian state: coherence condition b/a = m^2 omega^2 violated");
    const auto c = TrajectoryState{params.X, params.Y}.evolved(params.omega, t, units);
    PhaseField f(grid, true);
    const double na = 1.0 / std::sqrt(kPi * params.a), nb = 1.0 / std::sqrt(kPi * params.b);
    std::vector<double> gp(grid.n_p());
    for (std::size_t l = 0; l < grid.n_p(); ++l) {
        const double d = grid.p(l) - c.Y;
        gp[l] = nb * std::exp(-d * d / params.b);
    }
    for (std::size_t i = 0; i < grid.n_q(); ++i) {
        const double d = grid.q(i) - c.X;
        const double gq = na * std::exp(-d * d / params.a);
        for (std::size_t l = 0; l < grid.n_p(); ++l) f.at(i, l) = gq * gp[l];
    }
    return f;
}

}  // namespace phaselab
