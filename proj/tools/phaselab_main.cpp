#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "phaselab/error.hpp"
#include "phaselab/plot.hpp"
#include "phaselab/resonance.hpp"
#include "phaselab/scenario.hpp"

namespace fs = std::filesystem;
using namespace phaselab;

namespace {

int run_one(const fs::path& path, const fs::path& root, std::mutex& log) {
    ScenarioSpec spec;
    try {
        spec = load_scenario(path);
    } catch (const ValidationError& e) {
        std::lock_guard lk(log);
        std::cerr << path.string() << ": " << e.what() << '\n';
        return 2;
    }
    const RunOutcome out = run_scenario(spec, root);
    std::lock_guard lk(log);
    if (out.exit_code == 0)
        std::cout << spec.name << ": ok -> " << out.output_dir.string() << '\n';
    else
        std::cerr << spec.name << ": " << (out.exit_code == 3 ? "solver failure" : "invalid") << ": " << out.message
                  << (out.exit_code == 3 ? " (partial outputs in " + out.output_dir.string() + ")" : "") << '\n';
    return out.exit_code;
}

int fit_command(const fs::path& csv, double slope, std::optional<double> width_min, bool free, bool weighted,
                const fs::path& out_dir) {
    std::vector<std::string> warnings;
    const auto records = load_resonances(csv, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    if (records.empty()) return 0;
    FitOptions opt;
    opt.mode = free ? FitMode::free : FitMode::fixed_slope;
    opt.slope = slope;
    opt.weighted = weighted;
    opt.width_min = width_min ? *width_min : default_width_min(records.front().particle_class);
    const auto fit = fit_line(records, opt);
    const std::string report = fit_report_json(records, fit);
    std::cout << report;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream(out_dir / (csv.stem().string() + "_fit.json")) << report;
        std::ofstream(out_dir / (csv.stem().string() + "_fit.svg")) << resonance_svg(records, fit);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phaselab: phase-space coherence experiments"};
    app.require_subcommand(1);
    std::string out_root;
    app.add_option("--out-root", out_root, "Output root (default: $PHASELAB_OUT or ./phaselab_out)");

    auto* run = app.add_subcommand("run", "Run one scenario file");
    std::string spec_path;
    run->add_option("spec", spec_path, "Scenario file (.toml or .json)")->required();

    auto* batch = app.add_subcommand("batch", "Run every scenario in a directory");
    std::string batch_dir;
    unsigned jobs = 1;
    batch->add_option("dir", batch_dir, "Directory of scenario files")->required();
    batch->add_option("--jobs,-j", jobs, "Parallel scenarios")->check(CLI::PositiveNumber);

    auto* fit = app.add_subcommand("fit-resonances", "Fit M = slope * Gamma + C to a resonance CSV");
    std::string fit_csv, fit_out;
    double slope = 2.1;
    std::optional<double> width_min;
    bool free = false, weighted = false;
    fit->add_option("csv", fit_csv, "Resonance CSV")->required();
    fit->add_option("--slope", slope, "Fixed slope");
    fit->add_option("--width-min", width_min, "Exclude widths below this (MeV)");
    fit->add_flag("--free", free, "Fit slope and intercept");
    fit->add_flag("--weighted", weighted, "Weight by 1/mass_err^2");
    fit->add_option("--out", fit_out, "Directory for the JSON report and SVG");

    auto* plot = app.add_subcommand("plot", "Render a CSV as SVG");
    std::string plot_csv, plot_out, kind = "line";
    bool log_y = false;
    plot->add_option("csv", plot_csv, "Input CSV")->required();
    plot->add_option("--out", plot_out, "Output SVG")->required();
    plot->add_option("--kind", kind, "line or scatter")->check(CLI::IsMember({"line", "scatter"}));
    plot->add_flag("--log-y", log_y, "Logarithmic y axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const fs::path root = out_root.empty() ? default_output_root() : fs::path(out_root);
    std::mutex log;

    try {
        if (*run) return run_one(spec_path, root, log);
        if (*batch) {
            std::vector<fs::path> files;
            if (!fs::is_directory(batch_dir)) throw ValidationError("batch: " + batch_dir + " is not a directory");
            for (const auto& e : fs::directory_iterator(batch_dir)) {
                const auto ext = e.path().extension();
                if (e.is_regular_file() && (ext == ".toml" || ext == ".json")) files.push_back(e.path());
            }
            std::sort(files.begin(), files.end());
            std::atomic<std::size_t> next{0};
            std::atomic<int> worst{0};
            auto worker = [&] {
                for (std::size_t i; (i = next++) < files.size();) {
                    const int rc = run_one(files[i], root, log);
                    int cur = worst.load();
                    while (rc > cur && !worst.compare_exchange_weak(cur, rc)) {
                    }
                }
            };
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
            return worst.load();
        }
        if (*fit) return fit_command(fit_csv, slope, width_min, free, weighted, fit_out);
        if (*plot) {
            emit_plot(plot_csv, kind == "scatter" ? PlotKind::scatter : PlotKind::line, plot_out, log_y);
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
