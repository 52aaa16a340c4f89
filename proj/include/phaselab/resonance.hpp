#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace phaselab {

enum class ParticleClass { meson, baryon };

struct ResonanceRecord {
    std::string name;
    ParticleClass particle_class = ParticleClass::meson;
    std::string jpc;
    double mass = 0.0;   ///< MeV
    double width = 0.0;  ///< MeV
    std::optional<double> mass_err;
    std::optional<double> width_err;
    std::optional<double> table_estimate;  ///< optional `estimate_mev` column
    std::size_t line = 0;
};

/// Intercepts of the published 2.1 Gamma + C lines (full meson and baryon sets).
inline constexpr double kMesonIntercept = 1222.0;
inline constexpr double kBaryonIntercept = 1487.0;
inline constexpr double kReferenceSlope = 2.1;
double reference_intercept(ParticleClass c) noexcept;
/// Width thresholds of the published fit windows: 8.43 MeV mesons, 15.6 MeV baryons.
double default_width_min(ParticleClass c) noexcept;

const char* to_string(ParticleClass c) noexcept;
ParticleClass parse_particle_class(const std::string& s);

/// Reads name,class,jpc,mass_mev,width_mev[,mass_err,width_err][,estimate_mev].
/// Malformed rows throw ValidationError naming the line. An empty file
/// yields no records and a warning.
std::vector<ResonanceRecord> load_resonances(const std::filesystem::path& path,
                                             std::vector<std::string>* warnings = nullptr);

double predict_mass(double width, double slope, double intercept_C);

enum class FitMode { fixed_slope, free };

struct FitOptions {
    FitMode mode = FitMode::fixed_slope;
    double slope = kReferenceSlope;  ///< used in fixed-slope mode
    double width_min = 0.0;          ///< records with width < width_min are excluded
    bool weighted = false;           ///< 1/mass_err^2 weights; every used record needs mass_err
};

struct FitResult {
    double slope = 0.0;
    double intercept_C = 0.0;
    double rms_residual = 0.0;
    std::size_t n_records = 0;
    double width_threshold = 0.0;
    FitMode mode = FitMode::fixed_slope;
    std::vector<std::string> names;   ///< records used, in input order
    std::vector<double> residuals;    ///< M - (slope Gamma + C), MeV
};

FitResult fit_line(const std::vector<ResonanceRecord>& records, const FitOptions& options = {});

struct LifetimeRatio {
    double ratio = 0.0;      ///< M / Gamma = tau_L / delta t0
    bool violation = false;  ///< ratio below `bound`
};

LifetimeRatio lifetime_ratio(const ResonanceRecord& record, double bound = kReferenceSlope);

/// JSON report: fit parameters, per-record residuals, lifetime ratios and
/// predictions from the published intercepts.
std::string fit_report_json(const std::vector<ResonanceRecord>& records, const FitResult& fit);

/// M/Gamma against Gamma with the curve slope + C/Gamma.
std::string resonance_svg(const std::vector<ResonanceRecord>& records, const FitResult& fit);

}  // namespace phaselab
