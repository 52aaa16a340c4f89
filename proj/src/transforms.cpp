#include "phaselab/transforms.hpp"

#include <cmath>
#include <string>

#include "phaselab/error.hpp"
#include "phaselab/fft.hpp"

namespace phaselab {
namespace {

inline double parity(std::size_t x) noexcept { return (x & 1u) ? -1.0 : 1.0; }

void require_sigma(const Grid1D& g, double sigma) {
    if (std::abs(g.sigma() - sigma) > 1e-12 * g.sigma())
        throw ValidationError("wigner: sigma " + std::to_string(sigma) + " does not match the grid's sigma " +
                              std::to_string(g.sigma()));
}

// Rows of the kernel F(i, j) -> W(i, l), one centered inverse transform per row.
PhaseField invert_rows(const Grid1D& g, std::vector<cplx>& rows) {
    const std::size_t nq = g.n_q(), np = g.n_p(), h = np / 2;
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < np; ++j) rows[i * np + j] *= parity(j);
    fft::c2c(rows.data(), np, nq, 1, np, -1);
    PhaseField out(g);
    const double scale = g.dk() / (2.0 * kPi);
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t l = 0; l < np; ++l) out.at(i, l) = scale * parity(l + h) * rows[i * np + l].real();
    return out;
}

}  // namespace

MomentumFourierField fourier_momentum(const PhaseField& f) {
    const Grid1D& g = f.grid;
    const std::size_t nq = g.n_q(), np = g.n_p(), h = np / 2;
    MomentumFourierField out(g);
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t l = 0; l < np; ++l) out.at(i, l) = parity(l) * f.at(i, l);
    fft::c2c(out.values.data(), np, nq, 1, np, +1);
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < np; ++j) out.at(i, j) *= g.dp() * parity(j + h);
    return out;
}

PhaseField inverse_fourier_momentum(const MomentumFourierField& ft) {
    std::vector<cplx> rows = ft.values;
    return invert_rows(ft.grid, rows);
}

MomentumFourierField wigner_kernel(const WaveField& psi) {
    const Grid1D& g = psi.grid;
    const std::size_t nq = g.n_q(), np = g.n_p();
    const long n = static_cast<long>(nq);
    const long window = g.wigner_window();
    MomentumFourierField out(g);
    for (std::size_t i = 0; i < nq; ++i) {
        const long ii = static_cast<long>(i);
        for (std::size_t j = 0; j < np; ++j) {
            const long s = g.shift(j);
            if (std::abs(s) >= window) continue;
            const auto a = static_cast<std::size_t>(((ii + s) % n + n) % n);
            const auto b = static_cast<std::size_t>(((ii - s) % n + n) % n);
            out.at(i, j) = psi.values[a] * std::conj(psi.values[b]);
        }
    }
    return out;
}

PhaseField wigner(const WaveField& psi, double sigma) {
    require_sigma(psi.grid, sigma);
    auto kernel = wigner_kernel(psi);
    return invert_rows(psi.grid, kernel.values);
}

PhaseField wigner_of_operator(const DensityMatrixField& rho, double sigma) {
    const Grid1D& g = rho.grid;
    require_sigma(g, sigma);
    if (rho.hermiticity_defect() > 1e-10)
        throw ValidationError("wigner_of_operator: input is not Hermitian (refusing to symmetrize)");
    const std::size_t nq = g.n_q(), np = g.n_p();
    const long n = static_cast<long>(nq);
    const long window = g.wigner_window();
    std::vector<cplx> rows(nq * np);
    for (std::size_t i = 0; i < nq; ++i) {
        const long ii = static_cast<long>(i);
        for (std::size_t j = 0; j < np; ++j) {
            const long s = g.shift(j);
            if (std::abs(s) >= window) continue;
            const auto a = static_cast<std::size_t>(((ii + s) % n + n) % n);
            const auto b = static_cast<std::size_t>(((ii - s) % n + n) % n);
            rows[i * np + j] = rho.at(a, b);
        }
    }
    return invert_rows(g, rows);
}

double wigner_at(const WaveField& psi, std::size_t iq, double p) {
    const Grid1D& g = psi.grid;
    const long n = static_cast<long>(g.n_q());
    const long ii = static_cast<long>(iq);
    double acc = 0.0;
    for (long s = -g.wigner_window() + 1; s < g.wigner_window(); ++s) {
        const auto a = static_cast<std::size_t>(((ii + s) % n + n) % n);
        const auto b = static_cast<std::size_t>(((ii - s) % n + n) % n);
        const cplx term = std::polar(1.0, -static_cast<double>(s) * g.dk() * p) * psi.values[a] * std::conj(psi.values[b]);
        acc += term.real();
    }
    return acc * g.dk() / (2.0 * kPi);
}

MomentSet moments(const PhaseField& f, const PotentialSpec& V, const Units& units) {
    const Grid1D& g = f.grid;
    const std::size_t nq = g.n_q(), np = g.n_p();
    const auto pot = evaluate_potential(V, g);
    MomentSet m;
    m.density.assign(nq, 0.0);
    m.current.assign(nq, 0.0);
    double sq = 0.0, sp = 0.0, sp2 = 0.0, sh = 0.0, s0 = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        double n = 0.0, j = 0.0, p2 = 0.0;
        for (std::size_t l = 0; l < np; ++l) {
            const double v = f.at(i, l), p = g.p(l);
            n += v;
            j += p * v;
            p2 += p * p * v;
        }
        m.density[i] = n * g.dp();
        m.current[i] = j * g.dp() / units.mass;
        s0 += n;
        sq += g.q(i) * n;
        sp += j;
        sp2 += p2;
        sh += p2 / (2.0 * units.mass) + pot[i] * n;
    }
    const double area = g.cell_area();
    m.mass = s0 * area;
    if (m.mass != 0.0) {
        m.mean_q = sq * area / m.mass;
        m.mean_p = sp * area / m.mass;
        m.mean_p2 = sp2 * area / m.mass;
        m.mean_H = sh * area / m.mass;
    }
    return m;
}

double overlap(const PhaseField& f1, const PhaseField& f2) {
    if (!f1.grid.compatible(f2.grid)) throw ValidationError("overlap: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f1.values.size(); ++i) s += f1.values[i] * f2.values[i];
    return s * f1.grid.cell_area();
}

double entropy(const PhaseField& f, const Units& units) {
    const double h = units.h_cell();
    const double area = f.grid.cell_area();
    double negative = 0.0, s = 0.0;
    for (double v : f.values) {
        if (v <= 0.0) {
            negative -= v;
            continue;
        }
        s += v * std::log(h * v);
    }
    if (negative * area > 1e-8)
        throw ValidationError("entropy: field carries negative mass " + std::to_string(negative * area) +
                              "; not a classical density");
    return -units.k_boltzmann * s * area;
}

double relative_entropy(const PhaseField& f, const PhaseField& g) {
    if (!f.grid.compatible(g.grid)) throw ValidationError("relative_entropy: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double v = f.values[i];
        if (v <= 0.0) continue;
        if (!(g.values[i] > 0.0)) throw ValidationError("relative_entropy: reference vanishes on the support of f");
        s += v * std::log(v / g.values[i]);
    }
    return s * f.grid.cell_area();
}

CompleteSetSum complete_set_sum(std::span<const WaveField> states, double q, double p, double sigma) {
    CompleteSetSum out;
    out.n_states = states.size();
    if (states.empty()) return out;
    const Grid1D& g = states.front().grid;
    require_sigma(g, sigma);
    const auto [iq, dist] = g.nearest_q(q);
    if (dist > 1e-9 * g.dq()) throw ValidationError("complete_set_sum: q is not a grid node");
    for (std::size_t a = 0; a < states.size(); ++a)
        for (std::size_t b = a; b < states.size(); ++b) {
            const cplx ip = states[a].inner(states[b]);
            const double expect = a == b ? 1.0 : 0.0;
            if (std::abs(ip - expect) > 1e-6)
                throw ValidationError("complete_set_sum: states " + std::to_string(a) + "," + std::to_string(b) +
                                      " are not orthonormal");
        }
    for (const auto& psi : states) out.value += wigner_at(psi, iq, p);
    return out;
}

}  // namespace phaselab
