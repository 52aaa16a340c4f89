#include "phaselab/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "phaselab/checkpoint.hpp"
#include "phaselab/classical.hpp"
#include "phaselab/coherence.hpp"
#include "phaselab/csv.hpp"
#include "phaselab/error.hpp"
#include "phaselab/fft.hpp"
#include "phaselab/plot.hpp"
#include "phaselab/quantum.hpp"
#include "phaselab/resonance.hpp"
#include "phaselab/thermal.hpp"
#include "phaselab/transforms.hpp"

namespace phaselab {

using nlohmann::json;

// ------------------------------------------------------------------ config text

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

struct ValueParser {
    const std::string& s;
    std::size_t pos = 0;
    std::size_t line;

    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("config line " + std::to_string(line) + ": " + what);
    }
    void skip() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    json value() {
        skip();
        if (pos >= s.size()) fail("missing value");
        const char c = s[pos];
        if (c == '"') return string();
        if (c == '[') return array();
        std::size_t end = pos;
        while (end < s.size() && s[end] != ',' && s[end] != ']' && s[end] != ' ' && s[end] != '\t') ++end;
        const std::string tok = s.substr(pos, end - pos);
        pos = end;
        if (tok == "true") return true;
        if (tok == "false") return false;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size()) fail("cannot parse value '" + tok + "' (strings need double quotes)");
        const bool integral = tok.find_first_of(".eE") == std::string::npos;
        if (integral && std::abs(v) < 9e15) return static_cast<long long>(v);
        return v;
    }
    json string() {
        ++pos;
        std::string out;
        while (pos < s.size() && s[pos] != '"') {
            if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
            out += s[pos++];
        }
        if (pos >= s.size()) fail("unterminated string");
        ++pos;
        return out;
    }
    json array() {
        ++pos;
        json arr = json::array();
        skip();
        if (pos < s.size() && s[pos] == ']') {
            ++pos;
            return arr;
        }
        while (true) {
            arr.push_back(value());
            skip();
            if (pos >= s.size()) fail("unterminated array");
            if (s[pos] == ',') {
                ++pos;
                continue;
            }
            if (s[pos] == ']') {
                ++pos;
                return arr;
            }
            fail("expected ',' or ']' in array");
        }
    }
};

}  // namespace

json parse_config_text(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("config: invalid JSON: ") + e.what());
        }
    }
    json root = json::object();
    json* section = &root;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ValidationError("config line " + std::to_string(lineno) + ": bad section");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw ValidationError("config line " + std::to_string(lineno) + ": empty section name");
            section = &root;
            std::size_t start = 0;
            while (true) {
                const auto dot = name.find('.', start);
                const std::string part = name.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
                json& next = (*section)[part];
                if (next.is_null()) next = json::object();
                if (!next.is_object())
                    throw ValidationError("config line " + std::to_string(lineno) + ": '" + part + "' is not a section");
                section = &next;
                if (dot == std::string::npos) break;
                start = dot + 1;
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
        if (section->contains(key))
            throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        const std::string rhs = line.substr(eq + 1);
        ValueParser vp{rhs, 0, lineno};
        (*section)[key] = vp.value();
        vp.skip();
        if (vp.pos != rhs.size()) vp.fail("trailing characters after value");
    }
    return root;
}

json load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ------------------------------------------------------------------ spec

Experiment parse_experiment(const std::string& s) {
    static const std::map<std::string, Experiment> table = {
        {"wigner", Experiment::wigner},
        {"evolve-classical", Experiment::evolve_classical},
        {"evolve-quantum", Experiment::evolve_quantum},
        {"coherence-scan", Experiment::coherence_scan},
        {"thermal", Experiment::thermal},
        {"fit-resonances", Experiment::fit_resonances},
        {"eigens", Experiment::eigens},
    };
    const auto it = table.find(s);
    if (it == table.end()) throw ValidationError("config: unknown experiment '" + s + "'");
    return it->second;
}

const char* to_string(Experiment e) noexcept {
    switch (e) {
        case Experiment::wigner: return "wigner";
        case Experiment::evolve_classical: return "evolve-classical";
        case Experiment::evolve_quantum: return "evolve-quantum";
        case Experiment::coherence_scan: return "coherence-scan";
        case Experiment::thermal: return "thermal";
        case Experiment::fit_resonances: return "fit-resonances";
        case Experiment::eigens: return "eigens";
    }
    return "?";
}

Grid1D ScenarioSpec::grid() const {
    return Grid1D(grid_params.n_q, grid_params.q_min, grid_params.q_max, grid_params.n_p, units.sigma);
}

namespace {

class Section {
public:
    Section(const json& root, const std::string& name, std::set<std::string> allowed)
        : name_(name), allowed_(std::move(allowed)) {
        if (name.empty()) {
            node_ = &root;
        } else if (root.contains(name)) {
            node_ = &root.at(name);
            if (!node_->is_object()) throw ValidationError("config: [" + name + "] must be a section");
        }
        if (!node_) return;
        for (const auto& [k, v] : node_->items()) {
            if (name.empty() && v.is_object()) continue;
            if (!allowed_.count(k)) throw ValidationError("config: unknown key '" + k + "' in " + label());
        }
    }
    bool present() const { return node_ != nullptr; }
    bool has(const std::string& k) const { return node_ && node_->contains(k); }

    double number(const std::string& k, std::optional<double> fallback = std::nullopt) const {
        if (!has(k)) {
            if (fallback) return *fallback;
            throw ValidationError("config: " + label() + " needs '" + k + "'");
        }
        const auto& v = node_->at(k);
        if (!v.is_number()) throw ValidationError("config: " + label() + " " + k + " must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ValidationError("config: " + label() + " " + k + " must be finite");
        return d;
    }
    std::size_t count(const std::string& k, std::optional<std::size_t> fallback = std::nullopt) const {
        if (!has(k)) {
            if (fallback) return *fallback;
            throw ValidationError("config: " + label() + " needs '" + k + "'");
        }
        const auto& v = node_->at(k);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ValidationError("config: " + label() + " " + k + " must be a non-negative integer");
        return static_cast<std::size_t>(v.get<long long>());
    }
    std::string text(const std::string& k, std::optional<std::string> fallback = std::nullopt) const {
        if (!has(k)) {
            if (fallback) return *fallback;
            throw ValidationError("config: " + label() + " needs '" + k + "'");
        }
        const auto& v = node_->at(k);
        if (!v.is_string()) throw ValidationError("config: " + label() + " " + k + " must be a string");
        return v.get<std::string>();
    }
    bool flag(const std::string& k, bool fallback) const {
        if (!has(k)) return fallback;
        const auto& v = node_->at(k);
        if (!v.is_boolean()) throw ValidationError("config: " + label() + " " + k + " must be true or false");
        return v.get<bool>();
    }
    std::vector<double> numbers(const std::string& k) const {
        std::vector<double> out;
        if (!has(k)) return out;
        const auto& v = node_->at(k);
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) throw ValidationError("config: " + label() + " " + k + " must be an array of numbers");
        for (const auto& e : v) {
            if (!e.is_number()) throw ValidationError("config: " + label() + " " + k + " must hold numbers only");
            out.push_back(e.get<double>());
        }
        return out;
    }
    std::vector<std::string> texts(const std::string& k) const {
        std::vector<std::string> out;
        if (!has(k)) return out;
        const auto& v = node_->at(k);
        if (v.is_string()) return {v.get<std::string>()};
        if (!v.is_array()) throw ValidationError("config: " + label() + " " + k + " must be an array of strings");
        for (const auto& e : v) {
            if (!e.is_string()) throw ValidationError("config: " + label() + " " + k + " must hold strings only");
            out.push_back(e.get<std::string>());
        }
        return out;
    }

private:
    std::string label() const { return name_.empty() ? "top level" : "[" + name_ + "]"; }
    const json* node_ = nullptr;
    std::string name_;
    std::set<std::string> allowed_;
};

PotentialSpec parse_potential(const Section& s, const Units& units) {
    const std::string kind = s.text("kind", "free");
    if (kind == "free") return PotentialSpec::free();
    if (kind == "linear") return PotentialSpec::linear(s.number("force"));
    const double omega = s.number("omega", 1.0);
    if (kind == "harmonic") return PotentialSpec::harmonic(units.mass, omega);
    if (kind == "quartic")
        return PotentialSpec::polynomial({0, 0, 0.5 * units.mass * omega * omega, 0, s.number("c4")});
    if (kind == "polynomial") {
        const auto c = s.numbers("coefficients");
        if (c.empty() || c.size() > 5)
            throw ValidationError("config: [potential] coefficients must list 1 to 5 numbers (c0..c4)");
        std::array<double, 5> a{};
        std::copy(c.begin(), c.end(), a.begin());
        return PotentialSpec::polynomial(a);
    }
    throw ValidationError("config: unknown potential kind '" + kind + "'");
}

}  // namespace

ScenarioSpec parse_scenario(const json& cfg, const std::filesystem::path& base_dir) {
    if (!cfg.is_object()) throw ValidationError("config: top level must be a table");
    static const std::set<std::string> sections = {"grid", "units", "potential", "initial", "time",
                                                   "thermal", "scan", "eigens", "resonances", "output"};
    for (const auto& [k, v] : cfg.items())
        if (v.is_object() && !sections.count(k)) throw ValidationError("config: unknown section [" + k + "]");

    ScenarioSpec spec;
    spec.raw = cfg;
    const Section top(cfg, "", {"experiment", "name"});
    spec.experiment = parse_experiment(top.text("experiment"));
    spec.name = top.text("name", to_string(spec.experiment));

    const Section units(cfg, "units", {"sigma", "mass", "k_boltzmann"});
    spec.units.sigma = units.number("sigma", 1.0);
    spec.units.mass = units.number("mass", 1.0);
    spec.units.k_boltzmann = units.number("k_boltzmann", 1.0);
    spec.units.validate();

    const Section out(cfg, "output", {"dir"});
    spec.output_dir = out.text("dir", spec.name);

    if (spec.experiment == Experiment::fit_resonances) {
        const Section r(cfg, "resonances", {"files", "mode", "slope", "width_min"});
        for (const auto& f : r.texts("files")) {
            std::filesystem::path p(f);
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            if (!std::filesystem::exists(p)) throw ValidationError("config: resonance file " + p.string() + " not found");
            spec.resonance_files.push_back(p.string());
        }
        if (spec.resonance_files.empty()) throw ValidationError("config: [resonances] files is empty");
        spec.fit_mode = r.text("mode", "fixed_slope");
        if (spec.fit_mode != "fixed_slope" && spec.fit_mode != "free")
            throw ValidationError("config: [resonances] mode must be fixed_slope or free");
        spec.slope = r.number("slope", kReferenceSlope);
        if (r.has("width_min")) spec.width_min = r.number("width_min");
        return spec;
    }

    const Section grid(cfg, "grid", {"n_q", "n_p", "q_min", "q_max"});
    if (!grid.present()) throw ValidationError("config: [grid] section is required for " + spec.name);
    spec.grid_params.n_q = grid.count("n_q");
    spec.grid_params.n_p = grid.count("n_p", spec.grid_params.n_q);
    spec.grid_params.q_min = grid.number("q_min");
    spec.grid_params.q_max = grid.number("q_max");
    const Grid1D g = spec.grid();  // power-of-two and span checks

    const Section pot(cfg, "potential", {"kind", "omega", "force", "c4", "coefficients"});
    spec.potential = parse_potential(pot, spec.units);

    const Section ini(cfg, "initial", {"kind", "X", "Y", "omega", "width", "separation", "level", "seed"});
    spec.initial.kind = ini.text("kind", "glauber");
    static const std::set<std::string> kinds = {"glauber", "packet", "cat", "eigen", "random",
                                                "gaussian", "boltzmann", "equilibrium"};
    if (!kinds.count(spec.initial.kind)) throw ValidationError("config: unknown initial kind '" + spec.initial.kind + "'");
    spec.initial.X = ini.number("X", 0.0);
    spec.initial.Y = ini.number("Y", 0.0);
    spec.initial.omega = ini.number("omega", 1.0);
    spec.initial.width = ini.number("width", 1.0);
    spec.initial.separation = ini.number("separation", 0.0);
    spec.initial.level = ini.count("level", 0);
    if (ini.has("seed")) spec.initial.seed = ini.count("seed");
    if (spec.initial.kind == "random" && !spec.initial.seed)
        throw ValidationError("config: random initial states need an explicit [initial] seed");
    if (!(spec.initial.omega > 0.0) || !(spec.initial.width > 0.0))
        throw ValidationError("config: [initial] omega and width must be positive");

    const Section time(cfg, "time", {"t_final", "dt", "sample_every", "fourth_order"});
    spec.time.t_final = time.number("t_final", 0.0);
    spec.time.dt = time.number("dt", 0.0);
    spec.time.sample_every = time.count("sample_every", 1);
    spec.fourth_order = time.flag("fourth_order", false);
    const bool evolves = spec.experiment == Experiment::evolve_classical ||
                         spec.experiment == Experiment::evolve_quantum ||
                         spec.experiment == Experiment::coherence_scan || spec.experiment == Experiment::thermal;
    if (evolves) {
        if (!(spec.time.dt > 0.0) || !(spec.time.t_final > 0.0))
            throw ValidationError("config: [time] needs positive t_final and dt");
        const double n = std::round(spec.time.t_final / spec.time.dt);
        if (std::abs(n * spec.time.dt - spec.time.t_final) > 1e-9 * spec.time.t_final)
            throw ValidationError("config: [time] t_final must be a whole number of dt steps");
        if (spec.time.sample_every == 0) throw ValidationError("config: [time] sample_every must be >= 1");
    }

    const Section th(cfg, "thermal", {"gamma", "temperature", "mode", "statistics", "alpha"});
    spec.gamma = th.number("gamma", 0.0);
    spec.temperature = th.number("temperature", 1.0);
    spec.thermal_mode = th.text("mode", "classical");
    spec.statistics = th.text("statistics", "fermi");
    spec.alpha = th.number("alpha", 0.0);
    if (spec.experiment == Experiment::thermal) {
        ThermalParams::make(spec.gamma, spec.temperature, spec.units);
        if (spec.thermal_mode != "classical" && spec.thermal_mode != "quantum" && spec.thermal_mode != "nonlinear")
            throw ValidationError("config: [thermal] mode must be classical, quantum or nonlinear");
        if (spec.statistics != "fermi" && spec.statistics != "bose")
            throw ValidationError("config: [thermal] statistics must be fermi or bose");
        if (spec.thermal_mode == "nonlinear") {
            if (!spec.potential.is_polynomial() || spec.potential.degree() > 0)
                throw ValidationError("config: nonlinear thermal runs use the free particle (potential kind = free)");
            QuantumEqParams qp{spec.alpha, spec.statistics == "bose" ? Statistics::bose : Statistics::fermi,
                               1.0 / (spec.units.k_boltzmann * spec.temperature)};
            occupations(qp, g, spec.units);
        }
    }

    const Section scan(cfg, "scan", {"c4"});
    spec.c4_scan = scan.numbers("c4");
    const Section eig(cfg, "eigens", {"count"});
    spec.eigen_count = eig.count("count", 10);
    if (spec.experiment == Experiment::eigens && (spec.eigen_count == 0 || spec.eigen_count > g.n_q() / 4))
        throw ValidationError("config: [eigens] count must be between 1 and n_q/4");
    if (spec.initial.kind == "eigen" && spec.initial.level >= g.n_q() / 4)
        throw ValidationError("config: [initial] level too high for the grid");
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    return parse_scenario(load_config(path), path.parent_path());
}

std::filesystem::path default_output_root() {
    const char* env = std::getenv("PHASELAB_OUT");
    return env && *env ? std::filesystem::path(env) : std::filesystem::path("phaselab_out");
}

// ------------------------------------------------------------------ running

namespace {

struct Context {
    const ScenarioSpec& spec;
    std::filesystem::path dir;
    std::vector<std::filesystem::path>& files;

    std::filesystem::path file(const std::string& name) {
        auto p = dir / name;
        files.push_back(p);
        return p;
    }
};

WaveField packet(const Grid1D& g, double X, double Y, double a, const Units& u) {
    WaveField psi(g);
    for (std::size_t i = 0; i < g.n_q(); ++i) {
        const double q = g.q(i), d = q - X;
        psi.values[i] = std::polar(std::exp(-d * d / (2.0 * a)), q * Y / u.sigma);
    }
    psi.normalize(1.0);
    return psi;
}

WaveField make_wave(const ScenarioSpec& s, const Grid1D& g) {
    const auto& in = s.initial;
    if (in.kind == "glauber" || in.kind == "gaussian")
        return glauber_wavefunction(GaussianCoherentParams::for_oscillator(in.omega, in.X, in.Y, s.units), g, s.units);
    if (in.kind == "packet") return packet(g, in.X, in.Y, in.width, s.units);
    if (in.kind == "cat") {
        const auto a = GaussianCoherentParams::for_oscillator(in.omega, in.X - 0.5 * in.separation, in.Y, s.units);
        const auto b = GaussianCoherentParams::for_oscillator(in.omega, in.X + 0.5 * in.separation, in.Y, s.units);
        WaveField psi = glauber_wavefunction(a, g, s.units) + glauber_wavefunction(b, g, s.units);
        psi.normalize(1.0);
        return psi;
    }
    if (in.kind == "eigen") return stationary_states(s.potential, g, in.level + 1, s.units).back().state;
    if (in.kind == "random") {
        std::mt19937_64 rng(*in.seed);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        WaveField psi(g);
        const double reach = g.length() / 10.0;
        for (int c = 0; c < 6; ++c) {
            const double X = reach * U(rng), Y = 1.5 * U(rng), a = 0.6 + 0.4 * std::abs(U(rng));
            const cplx amp(U(rng), U(rng));
            const auto part = packet(g, X, Y, a, s.units);
            for (std::size_t i = 0; i < g.n_q(); ++i) psi.values[i] += amp * part.values[i];
        }
        psi.normalize(1.0);
        return psi;
    }
    throw ValidationError("initial kind '" + in.kind + "' does not define a wave function");
}

PhaseField make_phase_field(const ScenarioSpec& s, const Grid1D& g) {
    const auto& in = s.initial;
    if (in.kind == "gaussian")
        return gaussian_coherent_state(GaussianCoherentParams::for_oscillator(in.omega, in.X, in.Y, s.units), 0.0, g,
                                       s.units);
    if (in.kind == "boltzmann")
        return boltzmann_equilibrium(s.potential, 1.0 / (s.units.k_boltzmann * s.temperature), g, s.units);
    return wigner(make_wave(s, g), s.units.sigma);
}

double variance_p(const MomentSet& m) { return m.mean_p2 - m.mean_p * m.mean_p; }

void run_wigner(Context& c) {
    const auto g = c.spec.grid();
    const auto psi = make_wave(c.spec, g);
    const auto W = wigner(psi, c.spec.units.sigma);
    write_checkpoint(c.file("wigner.cpw"), W, c.spec.units);
    c.files.push_back(c.dir / "wigner.cpw.json");
    const auto m = moments(W, c.spec.potential, c.spec.units);
    {
        CsvWriter csv(c.file("marginal_q.csv"), {"q", "density", "abs_psi_sq"});
        for (std::size_t i = 0; i < g.n_q(); ++i) csv.row({g.q(i), m.density[i], std::norm(psi.values[i])});
    }
    {
        CsvWriter csv(c.file("marginal_p.csv"), {"p", "density"});
        for (std::size_t l = 0; l < g.n_p(); ++l) {
            double s = 0.0;
            for (std::size_t i = 0; i < g.n_q(); ++i) s += W.at(i, l);
            csv.row({g.p(l), s * g.dq()});
        }
    }
    emit_plot(c.dir / "marginal_q.csv", PlotKind::line, c.file("marginal_q.svg"));
    json summary = {{"mass", W.mass()},          {"negative_mass", 0.5 * (W.abs_mass() - W.mass())},
                    {"mean_q", m.mean_q},        {"mean_p", m.mean_p},
                    {"mean_p2", m.mean_p2},      {"mean_H", m.mean_H},
                    {"psi_norm", psi.norm()}};
    std::ofstream(c.file("summary.json")) << summary.dump(2) << '\n';
}

void run_evolve_classical(Context& c) {
    const auto& s = c.spec;
    const auto g = s.grid();
    PhaseField f = make_phase_field(s, g);
    LiouvilleSolver solver(g, s.potential, s.units);
    const auto steps = static_cast<std::size_t>(std::llround(s.time.t_final / s.time.dt));
    {
        CsvWriter csv(c.file("classical_series.csv"), {"t", "mass", "mean_q", "mean_p", "mean_H", "entropy"});
        auto sample = [&](double t) {
            const auto m = moments(f, s.potential, s.units);
            double S = std::numeric_limits<double>::quiet_NaN();
            try {
                S = entropy(f, s.units);
            } catch (const ValidationError&) {
            }
            csv.row({t, m.mass, m.mean_q, m.mean_p, m.mean_H, S});
        };
        sample(0.0);
        for (std::size_t done = 0; done < steps;) {
            const std::size_t chunk = std::min(s.time.sample_every, steps - done);
            solver.advance(f, s.time.dt, chunk);
            done += chunk;
            sample(static_cast<double>(done) * s.time.dt);
        }
    }
    write_checkpoint(c.file("final.cpw"), f, s.units);
    c.files.push_back(c.dir / "final.cpw.json");
}

void run_evolve_quantum(Context& c) {
    const auto& s = c.spec;
    const auto g = s.grid();
    WaveField psi = make_wave(s, g);
    TdseSolver solver(g, s.potential, s.units, s.fourth_order);
    const auto steps = static_cast<std::size_t>(std::llround(s.time.t_final / s.time.dt));
    {
        CsvWriter csv(c.file("quantum_series.csv"), {"t", "norm", "mean_q", "mean_p", "energy"});
        auto sample = [&](double t) {
            double n = 0.0, q = 0.0;
            for (std::size_t i = 0; i < g.n_q(); ++i) {
                n += std::norm(psi.values[i]);
                q += g.q(i) * std::norm(psi.values[i]);
            }
            const auto dpsi = fft::derivative(psi.values, g.dq(), 1);
            cplx p = 0.0;
            for (std::size_t i = 0; i < g.n_q(); ++i) p += std::conj(psi.values[i]) * dpsi[i];
            const double mean_p = (cplx(0.0, -s.units.sigma) * p).real() / n;
            csv.row({t, n * g.dq(), q / n, mean_p, energy_expectation(psi, s.potential, s.units)});
        };
        sample(0.0);
        for (std::size_t done = 0; done < steps;) {
            const std::size_t chunk = std::min(s.time.sample_every, steps - done);
            solver.advance(psi, s.time.dt, chunk);
            done += chunk;
            sample(static_cast<double>(done) * s.time.dt);
        }
    }
    write_checkpoint(c.file("final_psi.cpw"), psi, s.units);
    c.files.push_back(c.dir / "final_psi.cpw.json");
    write_checkpoint(c.file("final_wigner.cpw"), wigner(psi, s.units.sigma), s.units);
    c.files.push_back(c.dir / "final_wigner.cpw.json");
}

void run_coherence(Context& c) {
    const auto& s = c.spec;
    const auto g = s.grid();
    const WaveField psi0 = make_wave(s, g);
    std::vector<double> c4s = s.c4_scan;
    std::vector<PotentialSpec> pots;
    if (c4s.empty()) {
        pots.push_back(s.potential);
        c4s.push_back(s.potential.is_polynomial() ? s.potential.coefficients()[4] : 0.0);
    } else {
        if (!s.potential.is_polynomial()) throw ValidationError("coherence-scan: c4 scan needs a polynomial potential");
        for (double c4 : c4s) {
            auto a = s.potential.coefficients();
            a[4] = c4;
            pots.push_back(PotentialSpec::polynomial(a));
        }
    }
    std::vector<CoherenceReport> reports;
    for (const auto& V : pots)
        reports.push_back(coherence_residual(psi0, V, s.time.t_final, s.time.dt, s.units,
                                             {s.time.sample_every, s.fourth_order}));
    std::vector<std::string> header = {"t"};
    for (double c4 : c4s) header.push_back("residual_c4=" + format_double(c4));
    for (double c4 : c4s) header.push_back("moyal_c4=" + format_double(c4));
    {
        CsvWriter csv(c.file("coherence.csv"), header);
        for (std::size_t k = 0; k < reports.front().times.size(); ++k) {
            std::vector<double> row = {reports.front().times[k]};
            for (const auto& r : reports) row.push_back(r.residual_norm[k]);
            for (const auto& r : reports) row.push_back(r.moyal_estimate[k]);
            csv.row(row);
        }
    }
    PlotSpec plot;
    plot.title = s.name + ": Liouville vs Schrodinger";
    plot.x_label = "t";
    plot.y_label = "relative L2 residual";
    plot.log_y = true;
    for (std::size_t j = 0; j < reports.size(); ++j)
        plot.series.push_back({header[j + 1], reports[j].times, reports[j].residual_norm, PlotKind::line});
    std::ofstream(c.file("coherence.svg")) << render_svg(plot);
    json rep = {{"residual_norm", kResidualNorm}, {"c4", c4s}, {"final_residual", json::array()},
                {"potential_degree", json::array()}};
    for (const auto& r : reports) {
        rep["final_residual"].push_back(r.residual_norm.back());
        rep["potential_degree"].push_back(r.potential_degree);
    }
    std::ofstream(c.file("report.json")) << rep.dump(2) << '\n';
}

void run_thermal(Context& c) {
    const auto& s = c.spec;
    const auto g = s.grid();
    const auto tp = ThermalParams::make(s.gamma, s.temperature, s.units);
    const auto steps = static_cast<std::size_t>(std::llround(s.time.t_final / s.time.dt));
    auto loop = [&](auto&& advance, auto&& sample) {
        sample(0.0);
        for (std::size_t done = 0; done < steps;) {
            const std::size_t chunk = std::min(s.time.sample_every, steps - done);
            advance(chunk);
            done += chunk;
            sample(static_cast<double>(done) * s.time.dt);
        }
    };
    if (s.thermal_mode == "classical") {
        PhaseField f = make_phase_field(s, g);
        const PhaseField fe = boltzmann_equilibrium(s.potential, tp.beta, g, s.units);
        FokkerPlanckSolver solver(g, s.potential, tp, s.units);
        {
            CsvWriter csv(c.file("thermal_series.csv"),
                          {"t", "mass", "mean_p", "var_p", "mean_H", "entropy", "relative_entropy"});
            loop([&](std::size_t n) { solver.advance(f, s.time.dt, n); },
                 [&](double t) {
                     const auto m = moments(f, s.potential, s.units);
                     csv.row({t, m.mass, m.mean_p, variance_p(m), m.mean_H, entropy(f, s.units),
                              relative_entropy(f, fe)});
                 });
        }
        write_checkpoint(c.file("final.cpw"), f, s.units);
        c.files.push_back(c.dir / "final.cpw.json");
        return;
    }
    const std::vector<std::string> header = {"t", "trace", "purity", "min_eigenvalue", "mean_p2", "coherence_norm"};
    auto row = [&](double t, const DensityMatrixField& r) {
        return std::vector<double>{t, r.trace(), r.purity(), r.min_eigenvalue(), r.mean_p2(s.units.sigma),
                                   r.coherence_norm()};
    };
    if (s.thermal_mode == "quantum") {
        DensityMatrixField rho = DensityMatrixField::pure(make_wave(s, g));
        QuantumFokkerPlanck solver(g, s.potential, tp, s.units);
        {
            CsvWriter csv(c.file("qfp_series.csv"), header);
            loop([&](std::size_t n) { solver.advance(rho, s.time.dt, n); },
                 [&](double t) { csv.row(row(t, rho)); });
        }
        write_checkpoint(c.file("final_rho.cpw"), rho, s.units);
        c.files.push_back(c.dir / "final_rho.cpw.json");
        return;
    }
    const Statistics st = s.statistics == "bose" ? Statistics::bose : Statistics::fermi;
    DensityMatrixField f = quantum_equilibrium({s.alpha, st, tp.beta}, s.units, g);
    const DensityMatrixField f0 = f;
    {
        auto hdr = header;
        hdr.push_back("relative_change");
        CsvWriter csv(c.file("nonlinear_series.csv"), hdr);
        loop(
            [&](std::size_t n) {
                for (std::size_t k = 0; k < n; ++k) f = nonlinear_qfp_step(f, tp, s.time.dt, st, s.units);
            },
            [&](double t) {
                double num = 0.0, den = 0.0;
                for (std::size_t x = 0; x < f.values.size(); ++x) {
                    num += std::norm(f.values[x] - f0.values[x]);
                    den += std::norm(f0.values[x]);
                }
                auto r = row(t, f);
                r.push_back(std::sqrt(num / den));
                csv.row(r);
            });
    }
    write_checkpoint(c.file("final_f.cpw"), f, s.units);
    c.files.push_back(c.dir / "final_f.cpw.json");
}

void run_eigens(Context& c) {
    const auto& s = c.spec;
    const auto g = s.grid();
    const auto states = stationary_states(s.potential, g, s.eigen_count, s.units);
    CsvWriter csv(c.file("eigen.csv"), {"lambda", "energy", "wigner_energy", "residual"});
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& ep = states[k];
        const auto hpsi = apply_hamiltonian(ep.state, s.potential, s.units);
        double r = 0.0;
        for (std::size_t i = 0; i < g.n_q(); ++i) r += std::norm(hpsi.values[i] - ep.energy * ep.state.values[i]);
        const auto W = wigner(ep.state, s.units.sigma);
        const auto m = moments(W, s.potential, s.units);
        csv.row({static_cast<double>(k), ep.energy, m.mean_H * m.mass, std::sqrt(r * g.dq())});
        char name[32];
        std::snprintf(name, sizeof name, "state_%02zu.cpw", k);
        write_checkpoint(c.file(name), ep.state, s.units);
        c.files.push_back(c.dir / (std::string(name) + ".json"));
    }
}

void run_fit(Context& c) {
    const auto& s = c.spec;
    for (const auto& path : s.resonance_files) {
        const std::filesystem::path p(path);
        const auto records = load_resonances(p);
        if (records.empty()) continue;
        FitOptions opt;
        opt.mode = s.fit_mode == "free" ? FitMode::free : FitMode::fixed_slope;
        opt.slope = s.slope;
        opt.width_min = s.width_min ? *s.width_min : default_width_min(records.front().particle_class);
        const auto fit = fit_line(records, opt);
        const std::string stem = p.stem().string();
        std::ofstream(c.file(stem + "_fit.json")) << fit_report_json(records, fit);
        std::ofstream(c.file(stem + "_fit.svg")) << resonance_svg(records, fit);
    }
}

void write_status(const std::filesystem::path& dir, const ScenarioSpec& spec, const RunOutcome& out) {
    json files = json::array();
    for (const auto& f : out.files) files.push_back(f.filename().string());
    json j = {{"scenario", spec.name},
              {"experiment", to_string(spec.experiment)},
              {"status", out.exit_code == 0 ? "ok" : "failed"},
              {"partial", out.exit_code != 0},
              {"message", out.message},
              {"files", files}};
    std::ofstream(dir / "status.json") << j.dump(2) << '\n';
}

}  // namespace

RunOutcome run_scenario(const ScenarioSpec& spec, const std::filesystem::path& output_root) {
    RunOutcome out;
    out.output_dir = spec.output_dir.is_absolute() ? spec.output_dir : output_root / spec.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(out.output_dir, ec);
    if (ec) {
        out.exit_code = 2;
        out.message = "cannot create " + out.output_dir.string() + ": " + ec.message();
        return out;
    }
    Context ctx{spec, out.output_dir, out.files};
    std::ofstream(ctx.file("config.json")) << spec.raw.dump(2) << '\n';
    try {
        switch (spec.experiment) {
            case Experiment::wigner: run_wigner(ctx); break;
            case Experiment::evolve_classical: run_evolve_classical(ctx); break;
            case Experiment::evolve_quantum: run_evolve_quantum(ctx); break;
            case Experiment::coherence_scan: run_coherence(ctx); break;
            case Experiment::thermal: run_thermal(ctx); break;
            case Experiment::fit_resonances: run_fit(ctx); break;
            case Experiment::eigens: run_eigens(ctx); break;
        }
    } catch (const ValidationError& e) {
        out.exit_code = 2;
        out.message = e.what();
    } catch (const SolverError& e) {
        out.exit_code = 3;
        out.message = e.what();
    }
    write_status(out.output_dir, spec, out);
    return out;
}

}  // namespace phaselab
