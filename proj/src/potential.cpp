#include "phaselab/potential.hpp"

#include <cmath>
#include <string>

#include "phaselab/error.hpp"

namespace phaselab {

PotentialSpec PotentialSpec::polynomial(std::array<double, 5> coeffs) {
    PotentialSpec s;
    for (double c : coeffs)
        if (!std::isfinite(c)) throw ValidationError("potential: non-finite coefficient");
    s.coeffs_ = coeffs;
    s.degree_ = 0;
    for (int d = 4; d >= 0; --d) {
        if (coeffs[static_cast<std::size_t>(d)] != 0.0) {
            s.degree_ = d;
            break;
        }
    }
    return s;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> values) {
    if (values.empty()) throw ValidationError("potential: empty table");
    PotentialSpec s;
    s.tabulated_ = std::move(values);
    s.degree_ = kTabulated;
    return s;
}

double PotentialSpec::derivative(double q, int order) const noexcept {
    // Horner on the order-th derivative: sum_d c_d d!/(d-order)! q^(d-order)
    double acc = 0.0;
    for (int d = 4; d >= order; --d) {
        double falling = 1.0;
        for (int r = 0; r < order; ++r) falling *= static_cast<double>(d - r);
        acc = acc * q + coeffs_[static_cast<std::size_t>(d)] * falling;
    }
    return acc;
}

std::vector<double> evaluate_potential(const PotentialSpec& spec, const Grid1D& grid) {
    return potential_derivative(spec, grid, 0);
}

std::vector<double> potential_derivative(const PotentialSpec& spec, const Grid1D& grid, int order) {
    const std::size_t n = grid.n_q();
    if (order < 0 || order > 4) throw ValidationError("potential: derivative order must be 0..4");
    std::vector<double> out(n);
    if (spec.is_polynomial()) {
        for (std::size_t i = 0; i < n; ++i) out[i] = spec.derivative(grid.q(i), order);
        return out;
    }
    if (spec.table().size() != n)
        throw ValidationError("potential: tabulated length " + std::to_string(spec.table().size()) +
                              " does not match n_q = " + std::to_string(n));
    out = spec.table();
    const double h = grid.dq();
    for (int o = 0; o < order; ++o) {
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto at = [&](long off) {
                const long nn = static_cast<long>(n);
                return out[static_cast<std::size_t>((static_cast<long>(i) + off + 2 * nn) % nn)];
            };
            d[i] = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
        }
        out = std::move(d);
    }
    return out;
}

}  // namespace phaselab
