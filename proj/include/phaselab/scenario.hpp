#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "phaselab/grid.hpp"
#include "phaselab/potential.hpp"
#include "phaselab/units.hpp"

namespace phaselab {

/// key = value config with [section] headers, '#' comments, strings,
/// numbers, booleans and flat arrays. Text starting with '{' is read as JSON.
nlohmann::json parse_config_text(const std::string& text);
nlohmann::json load_config(const std::filesystem::path& path);

enum class Experiment { wigner, evolve_classical, evolve_quantum, coherence_scan, thermal, fit_resonances, eigens };

Experiment parse_experiment(const std::string& s);
const char* to_string(Experiment e) noexcept;

struct GridParams {
    std::size_t n_q = 0;
    std::size_t n_p = 0;
    double q_min = 0.0;
    double q_max = 0.0;
};

struct InitialState {
    std::string kind = "glauber";  ///< glauber | packet | cat | eigen | random | gaussian | boltzmann | equilibrium
    double X = 0.0;
    double Y = 0.0;
    double omega = 1.0;
    double width = 1.0;       ///< packet width a
    double separation = 0.0;  ///< cat: distance between the two components
    std::size_t level = 0;    ///< eigen
    std::optional<std::uint64_t> seed;
};

struct TimeParams {
    double t_final = 0.0;
    double dt = 0.0;
    std::size_t sample_every = 1;
};

struct ScenarioSpec {
    std::string name;
    Experiment experiment = Experiment::wigner;
    GridParams grid_params;
    Units units;
    PotentialSpec potential = PotentialSpec::free();
    InitialState initial;
    TimeParams time;
    double gamma = 0.0;
    double temperature = 1.0;
    std::string thermal_mode = "classical";  ///< classical | quantum | nonlinear
    std::string statistics = "fermi";
    double alpha = 0.0;
    std::vector<double> c4_scan;
    std::size_t eigen_count = 10;
    std::vector<std::string> resonance_files;
    std::string fit_mode = "fixed_slope";
    double slope = 2.1;
    std::optional<double> width_min;
    bool fourth_order = false;
    std::filesystem::path output_dir;  ///< relative paths resolve under the output root
    nlohmann::json raw;

    Grid1D grid() const;
};

/// Validates every referenced piece before anything runs (ValidationError on failure).
/// Relative resonance file paths resolve against `base_dir`.
ScenarioSpec parse_scenario(const nlohmann::json& config, const std::filesystem::path& base_dir = {});
ScenarioSpec load_scenario(const std::filesystem::path& path);

struct RunOutcome {
    int exit_code = 0;  ///< 0 ok, 2 validation, 3 solver failure
    std::string message;
    std::filesystem::path output_dir;
    std::vector<std::filesystem::path> files;
};

/// Runs one scenario under `output_root`. Solver failures leave partial
/// outputs and a status.json marked "failed".
RunOutcome run_scenario(const ScenarioSpec& spec, const std::filesystem::path& output_root);

/// Output root from PHASELAB_OUT, else "phaselab_out".
std::filesystem::path default_output_root();

}  // namespace phaselab
