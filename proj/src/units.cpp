#include "phaselab/units.hpp"

#include <cmath>

namespace phaselab {

double GaussianCoherentParams::effective_sigma() const { return std::sqrt(a * b); }

double GaussianCoherentParams::coherence_defect(const Units& units) const {
    const double target = units.mass * units.mass * omega * omega;
    return std::abs(b / a - target) / target;
}

}  // namespace phaselab
