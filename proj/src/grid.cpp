#include "phaselab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phaselab/error.hpp"
#include "phaselab/units.hpp"

namespace phaselab {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

Grid1D::Grid1D(std::size_t n_q, double q_min, double q_max, std::size_t n_p, double sigma)
    : n_q_(n_q), n_p_(n_p), q_min_(q_min), q_max_(q_max), sigma_(sigma) {
    if (!is_power_of_two(n_q) || n_q < 2)
        throw ValidationError("grid: n_q = " + std::to_string(n_q) + " is not a power of two >= 2");
    if (!is_power_of_two(n_p) || n_p < 2)
        throw ValidationError("grid: n_p = " + std::to_string(n_p) + " is not a power of two >= 2");
    if (!std::isfinite(q_min) || !std::isfinite(q_max) || !(q_max > q_min))
        throw ValidationError("grid: q span must be finite with q_max > q_min");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("grid: sigma must be positive");

    dq_ = (q_max - q_min) / static_cast<double>(n_q);
    dk_ = 2.0 * dq_ / sigma;
    dp_ = 2.0 * kPi / (static_cast<double>(n_p) * dk_);

    if (std::abs(0.5 * sigma_ * dk_ - dq_) > 1e-14 * dq_)
        throw ValidationError("grid: half shift sigma*dk/2 does not coincide with dq");
}

long Grid1D::wigner_window() const noexcept {
    return std::max<long>(1, std::min<long>(static_cast<long>(n_p_ / 2), static_cast<long>(n_q_ / 4)));
}

double Grid1D::q_wavenumber(std::size_t m) const noexcept {
    const long n = static_cast<long>(n_q_);
    long mm = static_cast<long>(m);
    if (mm >= n / 2) mm -= n;
    return 2.0 * kPi * static_cast<double>(mm) / length();
}

std::pair<std::size_t, double> Grid1D::nearest_q(double q) const noexcept {
    const double x = (q - q_min_) / dq_;
    const double r = std::round(x);
    const long n = static_cast<long>(n_q_);
    long idx = static_cast<long>(r) % n;
    if (idx < 0) idx += n;
    return {static_cast<std::size_t>(idx), std::abs(x - r) * dq_};
}

double Grid1D::q_difference(std::size_t a, std::size_t b) const noexcept {
    const long n = static_cast<long>(n_q_);
    long d = (static_cast<long>(a) - static_cast<long>(b)) % n;
    if (d < -n / 2) d += n;
    if (d >= n / 2) d -= n;
    return static_cast<double>(d) * dq_;
}

bool Grid1D::compatible(const Grid1D& o) const noexcept {
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); };
    return n_q_ == o.n_q_ && n_p_ == o.n_p_ && close(q_min_, o.q_min_) && close(q_max_, o.q_max_) &&
           close(sigma_, o.sigma_);
}

Grid1D construct_grid(std::size_t n_q, std::pair<double, double> q_span, double sigma) {
    return Grid1D(n_q, q_span.first, q_span.second, n_q, sigma);
}

Grid1D construct_grid(std::size_t n_q, std::pair<double, double> q_span, double sigma, std::size_t n_p) {
    return Grid1D(n_q, q_span.first, q_span.second, n_p, sigma);
}

}  // namespace phaselab
