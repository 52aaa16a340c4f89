#pragma once

#include <array>
#include <vector>

#include "phaselab/grid.hpp"

namespace phaselab {

/// V(q) either as a polynomial c0 + c1 q + ... + c4 q^4 or tabulated on the
/// q grid. Degree drives coherence expectations: Wigner functions evolve
/// classically only when degree <= 2.
class PotentialSpec {
public:
    static constexpr int kTabulated = -1;

    static PotentialSpec polynomial(std::array<double, 5> coeffs);
    static PotentialSpec free() { return polynomial({0, 0, 0, 0, 0}); }
    static PotentialSpec linear(double force) { return polynomial({0, force, 0, 0, 0}); }
    static PotentialSpec harmonic(double mass, double omega) {
        return polynomial({0, 0, 0.5 * mass * omega * omega, 0, 0});
    }
    static PotentialSpec tabulated(std::vector<double> values);

    bool is_polynomial() const noexcept { return tabulated_.empty(); }
    /// Highest nonzero coefficient (0 for constants), kTabulated for sampled data.
    int degree() const noexcept { return degree_; }
    bool at_most_quadratic() const noexcept { return is_polynomial() && degree_ <= 2; }
    const std::array<double, 5>& coefficients() const noexcept { return coeffs_; }
    const std::vector<double>& table() const noexcept { return tabulated_; }

    /// Order-th derivative of a polynomial potential at q (order 0..4).
    double derivative(double q, int order) const noexcept;
    double operator()(double q) const noexcept { return derivative(q, 0); }

private:
    std::array<double, 5> coeffs_{};
    std::vector<double> tabulated_;
    int degree_ = 0;
};

/// V sampled on the q nodes.
std::vector<double> evaluate_potential(const PotentialSpec& spec, const Grid1D& grid);

/// d^order V/dq^order on the q nodes. Tabulated potentials use periodic
/// 4th-order central differences.
std::vector<double> potential_derivative(const PotentialSpec& spec, const Grid1D& grid, int order);

}  // namespace phaselab
