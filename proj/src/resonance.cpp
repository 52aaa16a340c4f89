#include "phaselab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <json.hpp>

#include "phaselab/csv.hpp"
#include "phaselab/error.hpp"
#include "phaselab/plot.hpp"

namespace phaselab {
namespace {

double parse_number(const std::string& field, const std::string& what, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != field.size() || !std::isfinite(v))
        throw ValidationError(where + ": " + what + " '" + field + "' is not a number");
    return v;
}

}  // namespace

double reference_intercept(ParticleClass c) noexcept {
    return c == ParticleClass::meson ? kMesonIntercept : kBaryonIntercept;
}

double default_width_min(ParticleClass c) noexcept { return c == ParticleClass::meson ? 8.43 : 15.6; }

const char* to_string(ParticleClass c) noexcept { return c == ParticleClass::meson ? "meson" : "baryon"; }

ParticleClass parse_particle_class(const std::string& s) {
    if (s == "meson") return ParticleClass::meson;
    if (s == "baryon") return ParticleClass::baryon;
    throw ValidationError("unknown particle class '" + s + "' (expected meson or baryon)");
}

std::vector<ResonanceRecord> load_resonances(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    const CsvTable t = read_csv(path);
    auto warn = [&](const std::string& w) {
        if (warnings)
            warnings->push_back(w);
        else
            std::cerr << "warning: " << w << '\n';
    };
    if (t.header.empty()) {
        warn(path.string() + " is empty; no resonances loaded");
        return {};
    }
    const char* required[] = {"name", "class", "jpc", "mass_mev", "width_mev"};
    for (const char* col : required)
        if (t.column(col) < 0) throw ValidationError(path.string() + ": missing column '" + col + "'");
    const long c_name = t.column("name"), c_class = t.column("class"), c_jpc = t.column("jpc"),
               c_mass = t.column("mass_mev"), c_width = t.column("width_mev"), c_merr = t.column("mass_err"),
               c_werr = t.column("width_err"), c_est = t.column("estimate_mev");

    std::vector<ResonanceRecord> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = path.string() + ":" + std::to_string(t.line_numbers[r]);
        ResonanceRecord rec;
        rec.line = t.line_numbers[r];
        rec.name = row[static_cast<std::size_t>(c_name)];
        try {
            rec.particle_class = parse_particle_class(row[static_cast<std::size_t>(c_class)]);
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
        rec.jpc = row[static_cast<std::size_t>(c_jpc)];
        rec.mass = parse_number(row[static_cast<std::size_t>(c_mass)], "mass", where);
        rec.width = parse_number(row[static_cast<std::size_t>(c_width)], "width", where);
        if (!(rec.mass > 0.0)) throw ValidationError(where + ": mass must be positive");
        if (!(rec.width > 0.0)) throw ValidationError(where + ": width must be positive");
        auto optional_col = [&](long c, const char* what) -> std::optional<double> {
            if (c < 0 || row[static_cast<std::size_t>(c)].empty()) return std::nullopt;
            return parse_number(row[static_cast<std::size_t>(c)], what, where);
        };
        rec.mass_err = optional_col(c_merr, "mass_err");
        rec.width_err = optional_col(c_werr, "width_err");
        rec.table_estimate = optional_col(c_est, "estimate_mev");
        out.push_back(std::move(rec));
    }
    if (out.empty()) warn(path.string() + " has a header but no records");
    return out;
}

double predict_mass(double width, double slope, double intercept_C) {
    if (!(width > 0.0)) throw ValidationError("predict_mass: width must be positive");
    return slope * width + intercept_C;
}

FitResult fit_line(const std::vector<ResonanceRecord>& records, const FitOptions& opt) {
    std::vector<const ResonanceRecord*> used;
    for (const auto& r : records)
        if (r.width >= opt.width_min) used.push_back(&r);
    const std::size_t need = opt.mode == FitMode::free ? 2 : 1;
    if (used.size() < need)
        throw ValidationError("fit_line: " + std::to_string(used.size()) + " records with width >= " +
                              std::to_string(opt.width_min) + " MeV; need at least " + std::to_string(need));

    std::vector<double> w(used.size(), 1.0);
    if (opt.weighted)
        for (std::size_t i = 0; i < used.size(); ++i) {
            if (!used[i]->mass_err || !(*used[i]->mass_err > 0.0))
                throw ValidationError("fit_line: weighted fit needs a positive mass_err for " + used[i]->name);
            w[i] = 1.0 / (*used[i]->mass_err * *used[i]->mass_err);
        }
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < used.size(); ++i) {
        sw += w[i];
        sx += w[i] * used[i]->width;
        sy += w[i] * used[i]->mass;
    }
    const double xbar = sx / sw, ybar = sy / sw;

    FitResult fit;
    fit.mode = opt.mode;
    fit.width_threshold = opt.width_min;
    fit.n_records = used.size();
    if (opt.mode == FitMode::fixed_slope) {
        fit.slope = opt.slope;
    } else {
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < used.size(); ++i) {
            const double dx = used[i]->width - xbar;
            sxx += w[i] * dx * dx;
            sxy += w[i] * dx * (used[i]->mass - ybar);
        }
        if (!(sxx > 0.0)) throw ValidationError("fit_line: free fit needs at least two distinct widths");
        fit.slope = sxy / sxx;
    }
    fit.intercept_C = ybar - fit.slope * xbar;
    double ss = 0.0;
    for (const auto* r : used) {
        const double res = r->mass - (fit.slope * r->width + fit.intercept_C);
        fit.names.push_back(r->name);
        fit.residuals.push_back(res);
        ss += res * res;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(used.size()));
    return fit;
}

LifetimeRatio lifetime_ratio(const ResonanceRecord& record, double bound) {
    if (!(record.width > 0.0)) throw ValidationError("lifetime_ratio: width must be positive");
    const double r = record.mass / record.width;
    return {r, r < bound};
}

std::string fit_report_json(const std::vector<ResonanceRecord>& records, const FitResult& fit) {
    nlohmann::ordered_json j;
    j["mode"] = fit.mode == FitMode::free ? "free" : "fixed_slope";
    j["slope"] = fit.slope;
    j["intercept_C"] = fit.intercept_C;
    j["rms_residual"] = fit.rms_residual;
    j["n_records"] = fit.n_records;
    j["width_threshold"] = fit.width_threshold;
    auto& rows = j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json o;
        o["name"] = r.name;
        o["class"] = to_string(r.particle_class);
        o["jpc"] = r.jpc;
        o["mass"] = r.mass;
        o["width"] = r.width;
        const auto it = std::find(fit.names.begin(), fit.names.end(), r.name);
        o["in_fit"] = it != fit.names.end();
        o["fit_prediction"] = predict_mass(r.width, fit.slope, fit.intercept_C);
        o["fit_residual"] = r.mass - predict_mass(r.width, fit.slope, fit.intercept_C);
        o["reference_intercept"] = reference_intercept(r.particle_class);
        o["reference_prediction"] = predict_mass(r.width, kReferenceSlope, reference_intercept(r.particle_class));
        if (r.table_estimate) o["table_estimate"] = *r.table_estimate;
        const auto lr = lifetime_ratio(r);
        o["lifetime_ratio"] = lr.ratio;
        o["lifetime_bound_violation"] = lr.violation;
        rows.push_back(std::move(o));
    }
    return j.dump(2) + "\n";
}

std::string resonance_svg(const std::vector<ResonanceRecord>& records, const FitResult& fit) {
    if (records.empty()) throw ValidationError("resonance_svg: no records");
    PlotSpec spec;
    spec.title = "M/Gamma against Gamma";
    spec.x_label = "Gamma (MeV)";
    spec.y_label = "M / Gamma";
    PlotSeries pts{"data", {}, {}, PlotKind::scatter};
    double lo = records.front().width, hi = lo;
    for (const auto& r : records) {
        pts.x.push_back(r.width);
        pts.y.push_back(r.mass / r.width);
        lo = std::min(lo, r.width);
        hi = std::max(hi, r.width);
    }
    PlotSeries curve{"slope + C/Gamma", {}, {}, PlotKind::line};
    const double a = std::log(0.8 * lo), b = std::log(1.2 * hi);
    for (int i = 0; i <= 200; ++i) {
        const double g = std::exp(a + (b - a) * i / 200.0);
        curve.x.push_back(g);
        curve.y.push_back(fit.slope + fit.intercept_C / g);
    }
    spec.series = {pts, curve};
    spec.log_y = true;
    return render_svg(spec);
}

}  // namespace phaselab
