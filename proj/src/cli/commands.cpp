// commands.cpp — spectra, positivity, steady and hopfield commands
#include "uscav/cli/commands.hpp"
#include "uscav/errors.hpp"
#include "uscav/hopfield.hpp"
#include "uscav/langevin.hpp"
#include "uscav/master/protocol.hpp"
#include "uscav/master/steady.hpp"
#include "uscav/mbc.hpp"
#include "uscav/parallel.hpp"
#include "uscav/params_io.hpp"
#include "uscav/spectrum.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace uscav::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kTraceTolerance = 1e-8;

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << j.dump(2) << '\n';
}

std::vector<double> grid_or(const GlobalOptions& g, const std::string& fallback) {
    return parse_grid(g.grid.empty() ? fallback : g.grid);
}

nlohmann::json grid_json(const std::vector<double>& grid) {
    return {{"min", grid.front()}, {"max", grid.back()}, {"count", grid.size()}};
}

struct SpectrumMethod {
    bool mbc = true;
    Treatment cavity = Treatment::NonLindblad;
    Treatment damping = Treatment::NonLindblad;
};

SpectrumMethod parse_method(const std::string& s) {
    if (s == "mbc") return {};
    if (s == "mbc-l") return {true, Treatment::NonLindblad, Treatment::Lindblad};
    for (auto c : {Treatment::NonLindblad, Treatment::Lindblad})
        for (auto d : {Treatment::NonLindblad, Treatment::Lindblad})
            if (s == method_label(c, d)) return {false, c, d};
    throw ConfigError("unknown method '" + s + "'", 0, "method");
}

} // namespace

std::string tag(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    std::string s = buf;
    for (auto& ch : s) {
        if (ch == '.') ch = 'p';
        else if (ch == '-') ch = 'm';
        else if (ch == '+') ch = 'P';
    }
    return s;
}

std::string output_path(const GlobalOptions& g, const std::string& name) {
    std::error_code ec;
    fs::create_directories(g.out, ec);
    if (ec || !fs::is_directory(g.out)) throw ConfigError("output directory '" + g.out + "' is not writable", 0, "out");
    return (fs::path(g.out) / name).string();
}

LoweringSource lowering_from_string(const std::string& s) {
    if (s == "bogoliubov") return LoweringSource::Bogoliubov;
    if (s == "eigenbasis") return LoweringSource::Eigenbasis;
    throw ConfigError("lowering must be bogoliubov or eigenbasis, got '" + s + "'", 0, "lowering");
}

std::string to_string(LoweringSource s) { return s == LoweringSource::Bogoliubov ? "bogoliubov" : "eigenbasis"; }

SystemParams resolve_params(const GlobalOptions& g, const ParamOverrides& o) {
    SystemParams p;
    if (!g.config.empty()) p = apply_config(read_key_value_file(g.config), p);
    if (o.gamma) p.gamma = *o.gamma;
    if (o.lambda0) p.lambda0 = *o.lambda0;
    if (o.cav_len) p.cav_len = *o.cav_len;
    if (o.omega_a) p.omega_a = *o.omega_a;
    if (o.n_env) p.n_env = *o.n_env;
    if (o.modes) p.n_modes = *o.modes;
    if (o.gauge) p.gauge = gauge_from_string(*o.gauge);
    p.validate();
    return p;
}

std::vector<double> resolve_couplings(const SystemParams& p, const std::vector<double>& list) {
    if (list.empty()) return {p.coupling_g};
    for (double g : list)
        if (!(g >= 0)) throw ConfigError("couplings must be >= 0", 0, "g");
    return list;
}

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DegenerateInputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
}

// ---- spectra

int cmd_spectra(const GlobalOptions& g, const SpectraOptions& o, std::ostream& log) {
    const SystemParams base = resolve_params(g, o.params);
    const auto couplings = resolve_couplings(base, o.couplings);
    if (o.methods.empty() && !o.diff) throw ConfigError("methods list is empty", 0, "method");
    std::vector<SpectrumMethod> methods;
    for (const auto& m : o.methods) methods.push_back(parse_method(m));
    const auto grid = grid_or(g, "0.01:2.5:1000");
    SolveOptions so;
    if (o.solver == "dense") so.method = SolveMethod::Dense;
    else if (o.solver != "reduced") throw ConfigError("solver must be reduced or dense", 0, "solver");
    so.mode_mixing = !o.no_mixing;

    for (const auto& w : diagnostics(base)) log << "warning: " << w << '\n';

    nlohmann::json manifest = {{"version", USCAV_VERSION}, {"command", "spectra"}, {"grid", grid_json(grid)}};
    manifest["files"] = nlohmann::json::array();
    std::size_t flagged = 0;
    for (double coupling : couplings) {
        SystemParams p = base;
        p.coupling_g = coupling;
        for (std::size_t k = 0; k < methods.size(); ++k) {
            const auto& m = methods[k];
            const SpectrumTable t = m.mbc ? absorption_spectrum(p, grid, m.damping, g.threads)
                                          : langevin_spectrum(p, grid, m.cavity, m.damping, so, g.threads);
            const std::string name = "spectrum_" + o.methods[k] + "_g" + tag(coupling) + ".csv";
            write_csv(output_path(g, name), t);
            auto entry = sidecar_json(t);
            entry["path"] = name;
            entry["kind"] = "spectrum";
            manifest["files"].push_back(entry);
            flagged += t.flagged_count();
        }
        if (o.diff) {
            const auto curve = normalized_difference_curve(p, grid, so, g.threads);
            const std::string name = "difference_g" + tag(coupling) + ".csv";
            std::ofstream f(output_path(g, name));
            if (!f) throw ConfigError("cannot write '" + name + "'");
            nlohmann::json meta = {{"method", "difference"},
                                   {"definition", "(R_lindblad - R_nonlindblad) / (1 - R_nonlindblad)"},
                                   {"params", to_json(p)}};
            f << version_line() << "\n# " << meta.dump() << "\nomega,value,flag\n";
            std::size_t nf = 0;
            for (const auto& d : curve) {
                f << format_double(d.omega) << ',' << format_double(d.value) << ',' << to_string(d.flag) << '\n';
                nf += d.flag != RowFlag::Ok;
            }
            flagged += nf;
            manifest["files"].push_back(
                {{"path", name}, {"kind", "difference"}, {"params", to_json(p)}, {"rows", curve.size()}, {"flagged", nf}});
        }
    }
    manifest["flagged"] = flagged;
    write_json(output_path(g, "spectra_manifest.json"), manifest);
    log << "wrote " << manifest["files"].size() << " spectra to " << g.out;
    if (flagged) log << " (" << flagged << " flagged rows, see the flag column)";
    log << '\n';
    return kSuccess;
}

// ---- positivity

int cmd_positivity(const GlobalOptions& g, const PositivityOptions& o, std::ostream& log) {
    const SystemParams p = resolve_params(g, o.params);
    if (o.couplings.empty()) throw ConfigError("coupling list is empty", 0, "g");
    if (o.occupations.empty()) throw ConfigError("occupation list is empty", 0, "n");
    if (o.cutoff < 1) throw ConfigError("cutoff must be >= 1", 0, "cutoff");
    for (double n : o.occupations)
        if (!(n >= 0)) throw ConfigError("occupation must be >= 0", 0, "n");

    ProtocolOptions po;
    po.cutoff_photon = po.cutoff_exciton = o.cutoff;
    po.variant = variant_from_string(o.variant);
    po.lowering = lowering_from_string(o.lowering);
    po.kappa = o.kappa;
    po.t_end = o.t_end;
    po.record_interval = o.record_interval;
    po.evolve.step = o.step;
    po.evolve.step_check = !o.no_step_check;
    // Lindblad runs resolve violations near round-off, so their step control is tighter
    po.evolve.richardson_tol = o.richardson_tol ? *o.richardson_tol : (is_lindblad(po.variant) ? 1e-8 : 1e-6);
    if (o.integrator == "rk4") po.evolve.integrator = Integrator::RK4;
    else if (o.integrator != "lawson") throw ConfigError("integrator must be lawson or rk4", 0, "integrator");
    record_grid(po.t_end, po.record_interval); // validates

    nlohmann::json summary = {{"version", USCAV_VERSION},
                              {"command", "positivity"},
                              {"variant", o.variant},
                              {"lowering", o.lowering},
                              {"cutoff", o.cutoff},
                              {"params", to_json(p)}};
    summary["runs"] = nlohmann::json::array();
    int code = kSuccess;
    for (double n : o.occupations) {
        ProtocolOptions pn = po;
        pn.occupation = n;
        const auto runs = run_protocol_sweep(p, o.couplings, pn, g.threads);
        for (const auto& run : runs) {
            nlohmann::json r = {{"coupling_g", run.coupling_g}, {"occupation", n}, {"seconds", run.seconds}};
            if (!run.error.empty()) {
                r["error"] = run.error;
                code = std::max(code, run.error_code);
                log << "run g=" << run.coupling_g << " n=" << n << " failed: " << run.error << '\n';
                summary["runs"].push_back(r);
                continue;
            }
            const auto& tr = run.trajectory;
            const std::string name = "trajectory_" + o.variant + "_g" + tag(run.coupling_g) + "_n" + tag(n) + ".csv";
            write_trajectory_csv(output_path(g, name), run, p, pn);
            r["path"] = name;
            r["max_violation"] = tr.max_violation();
            r["time_of_max_violation"] = tr.time_of_max_violation();
            r["integrated_violation"] = tr.integrated_violation();
            r["final_photon_number"] = tr.points.back().photon_number;
            r["final_min_eigenvalue"] = tr.points.back().min_eigenvalue;
            r["max_trace_error"] = tr.max_trace_error();
            r["step"] = tr.step;
            r["richardson_error"] = tr.richardson_error;
            r["warnings"] = run.warnings;
            if (tr.max_trace_error() > kTraceTolerance) {
                r["invariant_failure"] = "trace drift " + format_double(tr.max_trace_error());
                code = std::max<int>(code, kInvariant);
            }
            summary["runs"].push_back(r);
            log << "g=" << format_double(run.coupling_g) << " n=" << format_double(n)
                << "  max violation " << format_double(tr.max_violation()) << " at t="
                << format_double(tr.time_of_max_violation()) << "  step " << tr.step << "  ("
                << format_double(run.seconds) << " s)\n";
        }
    }
    write_json(output_path(g, "positivity_summary.json"), summary);
    return code;
}

// ---- steady

int cmd_steady(const GlobalOptions& g, const SteadyOptions& o, std::ostream& log) {
    SystemParams p = resolve_params(g, o.params);
    if (o.coupling) p.coupling_g = *o.coupling;
    p.validate();
    if (o.cutoff < 1) throw ConfigError("cutoff must be >= 1", 0, "cutoff");
    const auto variant = variant_from_string(o.variant);
    const bool omega_variant = variant == DissipatorVariant::EigenLindbladOmega ||
                               variant == DissipatorVariant::PostTraceRWA ||
                               variant == DissipatorVariant::NonLindbladOmega;
    if (omega_variant && !o.temperature)
        throw ConfigError("variant '" + o.variant + "' needs --temperature", 0, "temperature");
    if (o.temperature && !(*o.temperature > 0)) throw ConfigError("temperature must be > 0", 0, "temperature");

    SystemParams one = p;
    one.n_modes = 1;
    const double kappa = o.kappa ? *o.kappa : cavity_loss_rates(one)[0];
    auto sys = std::make_shared<MasterSystem>(p, o.cutoff, o.cutoff);
    LiouvillianOptions lo;
    lo.lowering = lowering_from_string(o.lowering);
    const auto specs = omega_variant ? thermal_channels(variant, kappa, p.gamma, *o.temperature)
                                     : standard_channels(variant, kappa, p.gamma, o.occupation, 0.0);
    const Liouvillian L = build_liouvillian(sys, specs, lo);
    const SteadyState ss = steady_state(L);
    const Eigen::MatrixXcd& rho = ss.rho.matrix;

    nlohmann::json obs = {{"photon_number", (sys->dense(sys->photon_number()) * rho).trace().real()},
                          {"min_eigenvalue", min_eigenvalue(rho)},
                          {"trace", rho.trace().real()},
                          {"residual", ss.residual},
                          {"rcond", ss.rcond},
                          {"relaxed", ss.relaxed},
                          {"ground_fidelity", fidelity_pure(rho, sys->ground_state())}};
    if (o.temperature) {
        obs["gibbs_fidelity"] = fidelity(rho, sys->gibbs_state(*o.temperature));
        obs["gibbs_residual"] = gibbs_residual(L, *o.temperature);
    }
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j) entries.push_back({rho(i, j).real(), rho(i, j).imag()});
    nlohmann::json out = {{"version", USCAV_VERSION},
                          {"command", "steady"},
                          {"params", to_json(p)},
                          {"variant", o.variant},
                          {"lowering", o.lowering},
                          {"cutoff_photon", o.cutoff},
                          {"cutoff_exciton", o.cutoff},
                          {"kappa", kappa},
                          {"occupation", o.occupation},
                          {"basis", "fock |n_a, n_b>, index n_a (cutoff + 1) + n_b"},
                          {"dimension", rho.rows()},
                          {"rho", entries},
                          {"observables", obs},
                          {"warnings", L.warnings()}};
    if (o.temperature) out["temperature"] = *o.temperature;
    write_json(output_path(g, "steady.json"), out);
    log << obs.dump(2) << '\n';
    return kSuccess;
}

// ---- hopfield

int cmd_hopfield(const GlobalOptions& g, const HopfieldOptions& o, std::ostream& log) {
    SystemParams p = resolve_params(g, o.params);
    if (o.coupling) p.coupling_g = *o.coupling;
    if (o.max_modes > 0) p.n_modes = std::min(p.n_modes, o.max_modes);
    p.validate();
    const auto modes = diagonalize_all(p, g.threads);

    std::ofstream f(output_path(g, "hopfield.csv"));
    if (!f) throw ConfigError("cannot write hopfield.csv");
    f << version_line() << "\n# " << nlohmann::json{{"params", to_json(p)}}.dump() << '\n';
    f << "j,zeta,omega";
    for (const char* c : {"w", "x", "y", "z", "Q", "Pi", "X", "Y"}) f << ",re_" << c << ",im_" << c;
    f << '\n';
    for (const auto& m : modes)
        for (int zeta = 0; zeta < 2; ++zeta) {
            const auto& b = m[zeta];
            f << b.j << ',' << to_string(b.zeta) << ',' << format_double(b.omega);
            for (cplx c : {b.w, b.x, b.y, b.z, b.Q, b.Pi, b.X, b.Y})
                f << ',' << format_double(c.real()) << ',' << format_double(c.imag());
            f << '\n';
        }
    log << "wrote " << 2 * modes.size() << " branches to " << output_path(g, "hopfield.csv") << '\n';
    return kSuccess;
}

} // namespace uscav::cli
