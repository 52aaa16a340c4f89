#include "phaselab/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "phaselab/error.hpp"

namespace phaselab {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint writer assumes a little-endian host");

constexpr char kMagic[4] = {'C', 'P', 'W', '1'};

void write_raw(const std::filesystem::path& path, std::uint32_t rows, std::uint32_t cols, const double* data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("checkpoint: cannot open " + path.string() + " for writing");
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(rows) * cols));
    if (!out) throw SolverError("checkpoint: write failed for " + path.string());
}

nlohmann::json grid_json(const Grid1D& g, const Units& u) {
    return {{"n_q", g.n_q()},       {"n_p", g.n_p()},       {"q_min", g.q_min()}, {"q_max", g.q_max()},
            {"p_min", g.p_min()},   {"p_max", g.p_max()},   {"dq", g.dq()},       {"dp", g.dp()},
            {"dk", g.dk()},         {"sigma", g.sigma()},
            {"units", {{"sigma", u.sigma}, {"mass", u.mass}, {"k_boltzmann", u.k_boltzmann}}}};
}

void write_sidecar(const std::filesystem::path& path, nlohmann::json j) {
    std::ofstream out(path.string() + ".json");
    if (!out) throw ValidationError("checkpoint: cannot write sidecar for " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const PhaseField& f, const Units& units) {
    write_raw(path, static_cast<std::uint32_t>(f.grid.n_q()), static_cast<std::uint32_t>(f.grid.n_p()),
              f.values.data());
    auto j = grid_json(f.grid, units);
    j["kind"] = "phase_field";
    j["complex"] = false;
    j["classical"] = f.classical;
    write_sidecar(path, j);
}

void write_checkpoint(const std::filesystem::path& path, const WaveField& psi, const Units& units) {
    write_raw(path, static_cast<std::uint32_t>(psi.grid.n_q()), 2u,
              reinterpret_cast<const double*>(psi.values.data()));
    auto j = grid_json(psi.grid, units);
    j["kind"] = "wave_field";
    j["complex"] = true;
    j["norm_target"] = psi.norm_target;
    write_sidecar(path, j);
}

void write_checkpoint(const std::filesystem::path& path, const DensityMatrixField& rho, const Units& units) {
    const auto n = static_cast<std::uint32_t>(rho.grid.n_q());
    write_raw(path, n, 2u * n, reinterpret_cast<const double*>(rho.values.data()));
    auto j = grid_json(rho.grid, units);
    j["kind"] = "density_matrix";
    j["complex"] = true;
    write_sidecar(path, j);
}

PhaseField read_phase_checkpoint(const std::filesystem::path& path) {
    std::ifstream side(path.string() + ".json");
    if (!side) throw ValidationError("checkpoint: missing sidecar for " + path.string());
    nlohmann::json j;
    side >> j;
    if (j.value("kind", "") != "phase_field") throw ValidationError("checkpoint: not a phase field");
    Grid1D grid(j.at("n_q").get<std::size_t>(), j.at("q_min").get<double>(), j.at("q_max").get<double>(),
                j.at("n_p").get<std::size_t>(), j.at("sigma").get<double>());

    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("checkpoint: cannot open " + path.string());
    char magic[4];
    std::uint32_t rows = 0, cols = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&rows), sizeof rows);
    in.read(reinterpret_cast<char*>(&cols), sizeof cols);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("checkpoint: bad magic in " + path.string());
    if (rows != grid.n_q() || cols != grid.n_p()) throw ValidationError("checkpoint: header disagrees with sidecar");
    PhaseField f(grid, j.value("classical", false));
    in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(sizeof(double) * f.values.size()));
    if (!in) throw ValidationError("checkpoint: truncated payload in " + path.string());
    return f;
}

}  // namespace phaselab
