#pragma once

#include <filesystem>

#include "phaselab/fields.hpp"
#include "phaselab/units.hpp"

namespace phaselab {

/// Binary checkpoint layout: the 4 bytes "CPW1", u32 rows, u32 columns
/// (little endian), then rows*columns float64 little-endian values in
/// row-major order. Complex fields store interleaved (re, im) pairs, so
/// their column count is doubled. A JSON sidecar `<path>.json` records the
/// field kind, grid bounds and units.
void write_checkpoint(const std::filesystem::path& path, const PhaseField& f, const Units& units);
void write_checkpoint(const std::filesystem::path& path, const WaveField& psi, const Units& units);
void write_checkpoint(const std::filesystem::path& path, const DensityMatrixField& rho, const Units& units);

/// Reads a phase-field checkpoint and its sidecar.
PhaseField read_phase_checkpoint(const std::filesystem::path& path);

}  // namespace phaselab
