// module.cpp — pybind11 bindings for the uscav core (imported as uscav._core)
#include "uscav/cli/commands.hpp"
#include "uscav/errors.hpp"
#include "uscav/hopfield.hpp"
#include "uscav/langevin.hpp"
#include "uscav/master/protocol.hpp"
#include "uscav/master/steady.hpp"
#include "uscav/mbc.hpp"
#include "uscav/model.hpp"
#include "uscav/params_io.hpp"
#include "uscav/spectrum.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace uscav;

namespace {

py::dict spectrum_dict(const SpectrumTable& t) {
    const auto n = static_cast<py::ssize_t>(t.rows.size());
    py::array_t<double> omega(n), absorption(n);
    py::array_t<std::complex<double>> r(n);
    py::list flags;
    auto o = omega.mutable_unchecked<1>();
    auto a = absorption.mutable_unchecked<1>();
    auto rr = r.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < n; ++i) {
        o(i) = t.rows[i].omega;
        a(i) = t.rows[i].absorption;
        rr(i) = t.rows[i].r;
        flags.append(to_string(t.rows[i].flag));
    }
    py::dict d;
    d["method"] = t.method;
    d["damping"] = t.damping;
    d["omega"] = omega;
    d["r"] = r;
    d["absorption"] = absorption;
    d["flag"] = flags;
    return d;
}

py::dict branch_dict(const HopfieldBranch& b) {
    py::dict d;
    d["j"] = b.j;
    d["zeta"] = to_string(b.zeta);
    d["omega"] = b.omega;
    for (auto [k, v] : {std::pair{"w", b.w}, {"x", b.x}, {"y", b.y}, {"z", b.z}, {"Q", b.Q}, {"Pi", b.Pi},
                        {"X", b.X}, {"Y", b.Y}})
        d[k] = v;
    d["symplectic_norm"] = b.symplectic_norm();
    return d;
}

LoweringSource lowering(const std::string& s) { return cli::lowering_from_string(s); }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ultrastrong light-matter coupling in a lossy Fabry-Perot cavity";
    m.attr("__version__") = USCAV_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<SingularPointError>(m, "SingularPointError", PyExc_ArithmeticError);
    py::register_exception<AmbiguityError>(m, "AmbiguityError", PyExc_ArithmeticError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_ArithmeticError);

    py::enum_<Gauge>(m, "Gauge").value("Velocity", Gauge::Velocity).value("Length", Gauge::Length);
    py::enum_<Treatment>(m, "Treatment")
        .value("NonLindblad", Treatment::NonLindblad)
        .value("Lindblad", Treatment::Lindblad);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("omega_a", &SystemParams::omega_a)
        .def_readwrite("coupling_g", &SystemParams::coupling_g)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def_readwrite("lambda0", &SystemParams::lambda0)
        .def_readwrite("cav_len", &SystemParams::cav_len)
        .def_readwrite("n_modes", &SystemParams::n_modes)
        .def_readwrite("gauge", &SystemParams::gauge)
        .def_readwrite("n_env", &SystemParams::n_env)
        .def("validate", &SystemParams::validate)
        .def("to_json", [](const SystemParams& p) { return to_json(p).dump(); })
        .def_static("from_json", [](const std::string& s) { return params_from_json(nlohmann::json::parse(s)); })
        .def("__repr__", [](const SystemParams& p) { return "SystemParams(" + to_json(p).dump() + ")"; });

    m.def("cavity_loss_rates", &cavity_loss_rates, py::arg("params"));
    m.def("diagnostics", &diagnostics, py::arg("params"));
    m.def("dielectric", [](const SystemParams& p, double w) { return dielectric(p, w).value; }, py::arg("params"),
          py::arg("omega"));
    m.def("refractive_index", py::overload_cast<const SystemParams&, double>(&refractive_index), py::arg("params"),
          py::arg("omega"));

    m.def("polariton_frequencies", [](const SystemParams& p, double ck) {
        const auto w = polariton_frequencies(p, ck);
        return py::make_tuple(w[0], w[1]);
    }, py::arg("params"), py::arg("ck"));
    m.def("diagonalize", [](const SystemParams& p, double ck) {
        const auto mp = diagonalize_wavenumber(p, ck);
        return py::make_tuple(branch_dict(mp.lower), branch_dict(mp.upper));
    }, py::arg("params"), py::arg("ck"), "lower and upper polariton at wavenumber ck");

    m.def("reflection_coefficient", &reflection_coefficient, py::arg("params"), py::arg("omega"));
    m.def("mbc_spectrum", [](const SystemParams& p, const std::vector<double>& grid, Treatment damping, int threads) {
        return spectrum_dict(absorption_spectrum(p, grid, damping, threads));
    }, py::arg("params"), py::arg("grid"), py::arg("damping") = Treatment::NonLindblad, py::arg("threads") = 0);
    m.def("langevin_spectrum", [](const SystemParams& p, const std::vector<double>& grid, Treatment cavity,
                                  Treatment damping, bool dense, bool mode_mixing, int threads) {
        SolveOptions so;
        so.method = dense ? SolveMethod::Dense : SolveMethod::RankOneReduced;
        so.mode_mixing = mode_mixing;
        return spectrum_dict(langevin_spectrum(p, grid, cavity, damping, so, threads));
    }, py::arg("params"), py::arg("grid"), py::arg("cavity") = Treatment::NonLindblad,
          py::arg("damping") = Treatment::NonLindblad, py::arg("dense") = false, py::arg("mode_mixing") = true,
          py::arg("threads") = 0);
    m.def("normalized_difference", [](const SystemParams& p, const std::vector<double>& grid, int threads) {
        const auto c = normalized_difference_curve(p, grid, {}, threads);
        std::vector<double> v(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) v[i] = c[i].value;
        return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
    }, py::arg("params"), py::arg("grid"), py::arg("threads") = 0);

    m.def("run_protocol", [](const SystemParams& p, const std::string& variant, double occupation, int cutoff,
                             double t_end, double record, double step, double tol, const std::string& low) {
        ProtocolOptions o;
        o.cutoff_photon = o.cutoff_exciton = cutoff;
        o.variant = variant_from_string(variant);
        o.lowering = lowering(low);
        o.occupation = occupation;
        o.t_end = t_end;
        o.record_interval = record;
        o.evolve.step = step;
        o.evolve.richardson_tol = tol;
        ProtocolRun run;
        {
            py::gil_scoped_release nogil;
            run = run_protocol(p, o);
        }
        if (!run.error.empty()) throw IntegrationError(run.error, 0.0, run.trajectory.step);
        const auto& pts = run.trajectory.points;
        const auto n = static_cast<py::ssize_t>(pts.size());
        py::array_t<double> t(n), photons(n), min_eig(n), trace_err(n);
        for (py::ssize_t i = 0; i < n; ++i) {
            t.mutable_at(i) = pts[i].time;
            photons.mutable_at(i) = pts[i].photon_number;
            min_eig.mutable_at(i) = pts[i].min_eigenvalue;
            trace_err.mutable_at(i) = pts[i].trace_error;
        }
        py::dict d;
        d["t"] = t;
        d["photon_number"] = photons;
        d["min_eig"] = min_eig;
        d["trace_err"] = trace_err;
        d["max_violation"] = run.trajectory.max_violation();
        d["integrated_violation"] = run.trajectory.integrated_violation();
        d["step"] = run.trajectory.step;
        return d;
    }, py::arg("params"), py::arg("variant") = "non-lindblad", py::arg("occupation") = 0.0, py::arg("cutoff") = 24,
          py::arg("t_end") = 20.0, py::arg("record") = 0.25, py::arg("step") = 0.01, py::arg("tol") = 1e-6,
          py::arg("lowering") = "bogoliubov");

    m.def("steady_state", [](const SystemParams& p, const std::string& variant, int cutoff, double occupation,
                             std::optional<double> temperature, std::optional<double> kappa, const std::string& low) {
        SystemParams one = p;
        one.n_modes = 1;
        const double k = kappa ? *kappa : cavity_loss_rates(one)[0];
        auto sys = std::make_shared<MasterSystem>(p, cutoff, cutoff);
        LiouvillianOptions lo;
        lo.lowering = lowering(low);
        const auto v = variant_from_string(variant);
        const auto specs = temperature ? thermal_channels(v, k, p.gamma, *temperature)
                                       : standard_channels(v, k, p.gamma, occupation, 0.0);
        const auto L = build_liouvillian(sys, specs, lo);
        const auto ss = steady_state(L);
        py::dict d;
        d["rho"] = ss.rho.matrix;
        d["residual"] = ss.residual;
        d["ground_fidelity"] = fidelity_pure(ss.rho.matrix, sys->ground_state());
        if (temperature) {
            d["gibbs_fidelity"] = fidelity(ss.rho.matrix, sys->gibbs_state(*temperature));
            d["gibbs_residual"] = gibbs_residual(L, *temperature);
        }
        return d;
    }, py::arg("params"), py::arg("variant") = "non-lindblad", py::arg("cutoff") = 8, py::arg("occupation") = 0.0,
          py::arg("temperature") = py::none(), py::arg("kappa") = py::none(), py::arg("lowering") = "eigenbasis");

    m.def("verify", [](const SystemParams& p, int threads) { return cli::run_verify(p, threads).to_json().dump(); },
          py::arg("params"), py::arg("threads") = 0, "invariant report as a JSON string");
}
