#pragma once

#include <cstddef>
#include <utility>

namespace phaselab {

/// Periodic phase-space grid.
///
/// Positions q_i = q_min + i*dq for i in [0, n_q). The momentum-Fourier
/// variable k is sampled at k_j = (j - n_p/2)*dk with dk fixed by
/// sigma*dk = 2*dq, so the half shifts q +/- sigma*k_j/2 are exactly
/// q +/- (j - n_p/2)*dq and land on nodes. The p grid is the discrete
/// conjugate of the k grid: dp = 2*pi/(n_p*dk), p_l = (l - n_p/2)*dp.
class Grid1D {
public:
    Grid1D(std::size_t n_q, double q_min, double q_max, std::size_t n_p, double sigma);

    std::size_t n_q() const noexcept { return n_q_; }
    std::size_t n_p() const noexcept { return n_p_; }
    std::size_t size() const noexcept { return n_q_ * n_p_; }

    double q_min() const noexcept { return q_min_; }
    double q_max() const noexcept { return q_max_; }
    double length() const noexcept { return q_max_ - q_min_; }
    double sigma() const noexcept { return sigma_; }

    double dq() const noexcept { return dq_; }
    double dk() const noexcept { return dk_; }
    double dp() const noexcept { return dp_; }
    double cell_area() const noexcept { return dq_ * dp_; }

    double q(std::size_t i) const noexcept { return q_min_ + static_cast<double>(i) * dq_; }
    double p(std::size_t l) const noexcept {
        return (static_cast<double>(l) - static_cast<double>(n_p_ / 2)) * dp_;
    }
    double k(std::size_t j) const noexcept {
        return (static_cast<double>(j) - static_cast<double>(n_p_ / 2)) * dk_;
    }
    double p_min() const noexcept { return p(0); }
    double p_max() const noexcept { return p(n_p_ - 1); }

    /// Signed node shift for the k index j: sigma*k_j/2 = shift(j)*dq.
    long shift(std::size_t j) const noexcept {
        return static_cast<long>(j) - static_cast<long>(n_p_ / 2);
    }

    /// Wigner-type transforms use only |shift| < wigner_window() so that a
    /// pair of nodes is never counted through the periodic wrap as well.
    long wigner_window() const noexcept;

    /// Wave number of the FFT mode m on the q axis (standard FFT ordering).
    double q_wavenumber(std::size_t m) const noexcept;

    /// Index of the node nearest to q (periodic wrap), and the distance to it.
    std::pair<std::size_t, double> nearest_q(double q) const noexcept;

    /// q_a - q_b reduced into [-L/2, L/2).
    double q_difference(std::size_t a, std::size_t b) const noexcept;

    /// Same axes, same spacing and sigma.
    bool compatible(const Grid1D& other) const noexcept;

private:
    std::size_t n_q_;
    std::size_t n_p_;
    double q_min_;
    double q_max_;
    double sigma_;
    double dq_;
    double dk_;
    double dp_;
};

bool is_power_of_two(std::size_t n) noexcept;

/// Grid with n_p = n_q.
Grid1D construct_grid(std::size_t n_q, std::pair<double, double> q_span, double sigma);
Grid1D construct_grid(std::size_t n_q, std::pair<double, double> q_span, double sigma, std::size_t n_p);

}  // namespace phaselab
