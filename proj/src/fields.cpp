#include "phaselab/fields.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "phaselab/error.hpp"
#include "phaselab/fft.hpp"

namespace phaselab {

double PhaseField::mass() const noexcept {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.cell_area();
}

double PhaseField::abs_mass() const noexcept {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s * grid.cell_area();
}

double PhaseField::l2_norm() const noexcept {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s * grid.cell_area());
}

double PhaseField::relative_l2(const PhaseField& other) const {
    if (!grid.compatible(other.grid)) throw ValidationError("phase field: grid mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - other.values[i];
        num += d * d;
        den += other.values[i] * other.values[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double PhaseField::tail_fraction() const noexcept {
    const std::size_t nq = grid.n_q(), np = grid.n_p();
    const std::size_t bq = std::max<std::size_t>(1, nq / 16), bp = std::max<std::size_t>(1, np / 16);
    double tail = 0.0, total = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        const bool edge_q = i < bq || i >= nq - bq;
        for (std::size_t l = 0; l < np; ++l) {
            const double v = std::abs(at(i, l));
            total += v;
            if (edge_q || l < bp || l >= np - bp) tail += v;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

double WaveField::norm() const noexcept {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * grid.dq();
}

cplx WaveField::inner(const WaveField& other) const {
    if (values.size() != other.values.size()) throw ValidationError("wave field: grid mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += std::conj(values[i]) * other.values[i];
    return s * grid.dq();
}

void WaveField::normalize(double target) {
    const double n = norm();
    if (!(n > 0.0)) throw ValidationError("wave field: cannot normalize a zero field");
    const double f = std::sqrt(target / n);
    for (auto& v : values) v *= f;
    norm_target = target;
}

WaveField operator+(const WaveField& a, const WaveField& b) {
    if (!a.grid.compatible(b.grid)) throw ValidationError("wave field: grid mismatch");
    WaveField out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] + b.values[i];
    out.norm_target = out.norm();
    return out;
}

double ActionWaveState::mass() const noexcept {
    double s = 0.0;
    for (double v : n) s += v;
    return s * grid.dq();
}

double DensityMatrixField::trace() const noexcept {
    const std::size_t n = grid.n_q();
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += at(a, a).real();
    return s * grid.dq();
}

double DensityMatrixField::purity() const noexcept {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * grid.dq() * grid.dq();
}

double DensityMatrixField::hermiticity_defect() const noexcept {
    const std::size_t n = grid.n_q();
    double worst = 0.0, scale = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            worst = std::max(worst, std::abs(at(a, b) - std::conj(at(b, a))));
            scale = std::max(scale, std::abs(at(a, b)));
        }
    return scale > 0.0 ? worst / scale : 0.0;
}

double DensityMatrixField::coherence_norm() const noexcept {
    const std::size_t n = grid.n_q();
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b) s += std::norm(at(a, b));
    return std::sqrt(s) * grid.dq();
}

double DensityMatrixField::mean_p2(double sigma) const {
    // Tr(p rho p) = sigma^2 dq sum_a (d_a d_b rho)(a,a)
    const std::size_t n = grid.n_q();
    std::vector<cplx> work = values;
    fft::c2c(work.data(), n, n, 1, n, -1);  // along b
    fft::c2c(work.data(), n, n, n, 1, -1);  // along a
    const double h = grid.dq();
    const double scale = 1.0 / static_cast<double>(n * n);
    for (std::size_t ma = 0; ma < n; ++ma) {
        const double ka = (2 * ma == n) ? 0.0 : fft::wavenumber(ma, n, h);
        for (std::size_t mb = 0; mb < n; ++mb) {
            const double kb = (2 * mb == n) ? 0.0 : fft::wavenumber(mb, n, h);
            work[ma * n + mb] *= cplx(0.0, ka) * cplx(0.0, kb) * scale;
        }
    }
    fft::c2c(work.data(), n, n, n, 1, +1);
    fft::c2c(work.data(), n, n, 1, n, +1);
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += work[a * n + a].real();
    return sigma * sigma * h * s;
}

double DensityMatrixField::min_eigenvalue() const {
    const std::size_t n = grid.n_q();
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                0.5 * (at(a, b) + std::conj(at(b, a))) * grid.dq();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

DensityMatrixField DensityMatrixField::pure(const WaveField& psi) {
    DensityMatrixField rho(psi.grid);
    const std::size_t n = psi.grid.n_q();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) rho.at(a, b) = psi.values[a] * std::conj(psi.values[b]);
    return rho;
}

}  // namespace phaselab
