#pragma once

#include <numbers>

#include "phaselab/error.hpp"

namespace phaselab {

inline constexpr double kPi = std::numbers::pi;

/// Unit system. sigma is the action scale (hbar in quantum use); the
/// elementary phase cell in one dimension has area h = 2*pi*sigma.
struct Units {
    double sigma = 1.0;
    double mass = 1.0;
    double k_boltzmann = 1.0;

    double h_cell() const noexcept { return 2.0 * kPi * sigma; }

    void validate() const {
        if (!(sigma > 0.0)) throw ValidationError("units: sigma must be positive");
        if (!(mass > 0.0)) throw ValidationError("units: mass must be positive");
        if (!(k_boltzmann > 0.0)) throw ValidationError("units: k_boltzmann must be positive");
    }
};

/// Friction and bath temperature. beta is kept consistent with k_B from the Units it was built with.
struct ThermalParams {
    double gamma = 0.0;
    double temperature = 1.0;
    double beta = 1.0;

    static ThermalParams make(double gamma, double temperature, const Units& units) {
        if (!(gamma >= 0.0)) throw ValidationError("thermal: gamma must be >= 0");
        if (!(temperature > 0.0)) throw ValidationError("thermal: temperature must be > 0");
        return ThermalParams{gamma, temperature, 1.0 / (units.k_boltzmann * temperature)};
    }

    double kT() const noexcept { return 1.0 / beta; }
};

/// Parameters of a harmonic-oscillator Gaussian g^X(q) g^Y(p) with
/// widths a (position) and b (momentum). Coherent when b/a = m^2 omega^2.
struct GaussianCoherentParams {
    double a = 1.0;
    double b = 1.0;
    double X = 0.0;
    double Y = 0.0;
    double omega = 1.0;

    /// Minimum-uncertainty widths for the given oscillator: a = sigma/(m omega), b = sigma m omega.
    static GaussianCoherentParams for_oscillator(double omega, double X, double Y, const Units& units) {
        return {units.sigma / (units.mass * omega), units.sigma * units.mass * omega, X, Y, omega};
    }

    double effective_sigma() const;
    /// Relative violation |b/a - m^2 omega^2| / (m^2 omega^2).
    double coherence_defect(const Units& units) const;
};

}  // namespace phaselab
