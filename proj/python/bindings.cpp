#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>

#include "phaselab/coherence.hpp"
#include "phaselab/error.hpp"
#include "phaselab/quantum.hpp"
#include "phaselab/resonance.hpp"
#include "phaselab/scenario.hpp"
#include "phaselab/transforms.hpp"

namespace py = pybind11;
using namespace phaselab;

namespace {

using carray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using darray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Units units_for(double sigma, double mass) {
    Units u;
    u.sigma = sigma;
    u.mass = mass;
    return u;
}

// c0..c4, shorter lists are padded with zeros
PotentialSpec potential(const std::vector<double>& c) {
    if (c.size() > 5) throw ValidationError("potential: at most 5 coefficients (c0..c4)");
    std::array<double, 5> a{};
    std::copy(c.begin(), c.end(), a.begin());
    return PotentialSpec::polynomial(a);
}

WaveField to_wave(const Grid1D& g, const carray& psi) {
    if (psi.ndim() != 1 || static_cast<std::size_t>(psi.shape(0)) != g.n_q())
        throw ValidationError("psi must be a 1-d array of length n_q");
    WaveField w(g);
    std::copy(psi.data(), psi.data() + g.n_q(), w.values.begin());
    return w;
}

carray from_wave(const WaveField& w) {
    carray out(static_cast<py::ssize_t>(w.values.size()));
    std::copy(w.values.begin(), w.values.end(), out.mutable_data());
    return out;
}

darray from_phase(const PhaseField& f) {
    darray out({static_cast<py::ssize_t>(f.grid.n_q()), static_cast<py::ssize_t>(f.grid.n_p())});
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

PhaseField to_phase(const Grid1D& g, const darray& a) {
    if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != g.n_q() ||
        static_cast<std::size_t>(a.shape(1)) != g.n_p())
        throw ValidationError("phase field must have shape (n_q, n_p)");
    PhaseField f(g);
    std::copy(a.data(), a.data() + g.size(), f.values.begin());
    return f;
}

darray axis(std::size_t n, auto&& at) {
    darray out(static_cast<py::ssize_t>(n));
    for (std::size_t i = 0; i < n; ++i) out.mutable_data()[i] = at(i);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "phase-space coherence toolkit";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<Grid1D>(m, "Grid")
        .def(py::init<std::size_t, double, double, std::size_t, double>(), py::arg("n_q"), py::arg("q_min"),
             py::arg("q_max"), py::arg("n_p"), py::arg("sigma") = 1.0)
        .def_property_readonly("n_q", &Grid1D::n_q)
        .def_property_readonly("n_p", &Grid1D::n_p)
        .def_property_readonly("dq", &Grid1D::dq)
        .def_property_readonly("dp", &Grid1D::dp)
        .def_property_readonly("sigma", &Grid1D::sigma)
        .def_property_readonly("q", [](const Grid1D& g) { return axis(g.n_q(), [&](std::size_t i) { return g.q(i); }); })
        .def_property_readonly("p", [](const Grid1D& g) { return axis(g.n_p(), [&](std::size_t l) { return g.p(l); }); })
        .def("__repr__", [](const Grid1D& g) {
            return "Grid(n_q=" + std::to_string(g.n_q()) + ", n_p=" + std::to_string(g.n_p()) + ")";
        });

    m.def(
        "glauber",
        [](const Grid1D& g, double omega, double X, double Y, double mass) {
            const Units u = units_for(g.sigma(), mass);
            return from_wave(glauber_wavefunction(GaussianCoherentParams::for_oscillator(omega, X, Y, u), g, u));
        },
        py::arg("grid"), py::arg("omega") = 1.0, py::arg("X") = 0.0, py::arg("Y") = 0.0, py::arg("mass") = 1.0,
        "Glauber coherent state on the grid, normalized to dq sum |psi|^2 = 1.");

    m.def(
        "wigner", [](const Grid1D& g, const carray& psi) { return from_phase(wigner(to_wave(g, psi), g.sigma())); },
        py::arg("grid"), py::arg("psi"), "Wigner function W[i, l] at (q_i, p_l).");

    m.def(
        "overlap", [](const Grid1D& g, const darray& a, const darray& b) { return overlap(to_phase(g, a), to_phase(g, b)); },
        py::arg("grid"), py::arg("f1"), py::arg("f2"));

    m.def(
        "entropy",
        [](const Grid1D& g, const darray& f) { return entropy(to_phase(g, f), units_for(g.sigma(), 1.0)); },
        py::arg("grid"), py::arg("f"));

    m.def(
        "evolve_quantum",
        [](const Grid1D& g, const carray& psi, const std::vector<double>& coeffs, double dt, std::size_t steps,
           bool fourth_order, double mass) {
            auto w = to_wave(g, psi);
            {
                py::gil_scoped_release nogil;
                TdseSolver(g, potential(coeffs), units_for(g.sigma(), mass), fourth_order).advance(w, dt, steps);
            }
            return from_wave(w);
        },
        py::arg("grid"), py::arg("psi"), py::arg("coefficients"), py::arg("dt"), py::arg("steps"),
        py::arg("fourth_order") = false, py::arg("mass") = 1.0, "Split-operator Schrodinger evolution.");

    m.def(
        "stationary_states",
        [](const Grid1D& g, const std::vector<double>& coeffs, std::size_t count, double mass) {
            const auto st = stationary_states(potential(coeffs), g, count, units_for(g.sigma(), mass));
            darray energies(static_cast<py::ssize_t>(st.size()));
            carray states({static_cast<py::ssize_t>(st.size()), static_cast<py::ssize_t>(g.n_q())});
            for (std::size_t k = 0; k < st.size(); ++k) {
                energies.mutable_data()[k] = st[k].energy;
                std::copy(st[k].state.values.begin(), st[k].state.values.end(), states.mutable_data() + k * g.n_q());
            }
            return py::make_tuple(energies, states);
        },
        py::arg("grid"), py::arg("coefficients"), py::arg("count"), py::arg("mass") = 1.0);

    m.def(
        "coherence_residual",
        [](const Grid1D& g, const carray& psi, const std::vector<double>& coeffs, double t_final, double dt,
           std::size_t sample_every) {
            CoherenceReport r;
            const auto w = to_wave(g, psi);
            {
                py::gil_scoped_release nogil;
                r = coherence_residual(w, potential(coeffs), t_final, dt, units_for(g.sigma(), 1.0), {sample_every});
            }
            py::dict d;
            d["times"] = r.times;
            d["residual"] = r.residual_norm;
            d["moyal_estimate"] = r.moyal_estimate;
            d["potential_degree"] = r.potential_degree;
            d["norm"] = kResidualNorm;
            return d;
        },
        py::arg("grid"), py::arg("psi"), py::arg("coefficients"), py::arg("t_final"), py::arg("dt"),
        py::arg("sample_every") = 0);

    m.def(
        "fit_resonances",
        [](const std::filesystem::path& csv, bool free, double slope, std::optional<double> width_min, bool weighted) {
            const auto records = load_resonances(csv);
            if (records.empty()) throw ValidationError(csv.string() + " has no records");
            FitOptions opt;
            opt.mode = free ? FitMode::free : FitMode::fixed_slope;
            opt.slope = slope;
            opt.weighted = weighted;
            opt.width_min = width_min ? *width_min : default_width_min(records.front().particle_class);
            return fit_report_json(records, fit_line(records, opt));
        },
        py::arg("csv"), py::arg("free") = false, py::arg("slope") = kReferenceSlope, py::arg("width_min") = py::none(),
        py::arg("weighted") = false, "JSON report of the M = slope * Gamma + C fit.");

    m.def(
        "run_scenario",
        [](const std::filesystem::path& spec, const std::filesystem::path& out_root) {
            const auto s = load_scenario(spec);
            RunOutcome out;
            {
                py::gil_scoped_release nogil;
                out = run_scenario(s, out_root);
            }
            py::dict d;
            d["exit_code"] = out.exit_code;
            d["message"] = out.message;
            d["output_dir"] = out.output_dir.string();
            std::vector<std::string> files;
            for (const auto& f : out.files) files.push_back(f.string());
            d["files"] = files;
            return d;
        },
        py::arg("spec"), py::arg("out_root"));
}
