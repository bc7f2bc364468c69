// main.cpp — uscav command line: argument parsing and dispatch
#include "uscav/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace uscav::cli;

namespace {

void add_param_flags(CLI::App* sub, ParamOverrides& o) {
    sub->add_option("--gamma", o.gamma, "exciton damping rate");
    sub->add_option("--lambda0", o.lambda0, "mirror strength at omega_a");
    sub->add_option("--modes", o.modes, "number of cavity modes J");
    sub->add_option("--gauge", o.gauge, "velocity | length");
    sub->add_option("--cav-len", o.cav_len, "cavity length");
    sub->add_option("--omega-a", o.omega_a, "exciton frequency");
    sub->add_option("--n-env", o.n_env, "background refractive index (0: vacuum)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uscav: ultrastrong light-matter coupling in a lossy cavity"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the command name

    GlobalOptions g;
    app.add_option("--config", g.config, "key = value parameter file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output directory");
    app.add_option("--threads", g.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--grid", g.grid, "frequency grid min:max:count");

    SpectraOptions so;
    auto* spectra = app.add_subcommand("spectra", "absorption spectra by MBC and Langevin methods");
    add_param_flags(spectra, so.params);
    spectra->add_option("--method", so.methods, "mbc, mbc-l, langevin-{nl,l}-{nl,l}")->delimiter(',');
    spectra->add_option("--g", so.couplings, "coupling strengths")->delimiter(',');
    spectra->add_flag("--diff", so.diff, "write the normalized Lindblad/non-Lindblad difference");
    spectra->add_option("--solver", so.solver, "reduced | dense");
    spectra->add_flag("--no-mixing", so.no_mixing, "drop the port-mediated mode mixing");

    PositivityOptions po;
    auto* positivity = app.add_subcommand("positivity", "vacuum-quench trajectories of the master equation");
    add_param_flags(positivity, po.params);
    positivity->add_option("--g", po.couplings, "coupling strengths")->delimiter(',');
    positivity->add_option("--n", po.occupations, "exciton bath occupation(s)")->delimiter(',');
    positivity->add_option("--variant", po.variant, "photon-lindblad | eigen-lindblad | non-lindblad | post-trace-rwa | eigen-lindblad-omega | non-lindblad-omega");
    positivity->add_option("--lowering", po.lowering, "bogoliubov | eigenbasis");
    positivity->add_option("--cutoff", po.cutoff, "Fock cutoff per oscillator");
    positivity->add_option("--kappa", po.kappa, "cavity loss rate (default: mode 1)");
    positivity->add_option("--t-end", po.t_end, "final time");
    positivity->add_option("--record", po.record_interval, "output interval");
    positivity->add_option("--step", po.step, "initial time step");
    positivity->add_option("--tol", po.richardson_tol, "Richardson error tolerance");
    positivity->add_flag("--no-step-check", po.no_step_check, "keep --step without the Richardson check");
    positivity->add_option("--integrator", po.integrator, "lawson | rk4");

    SteadyOptions st;
    auto* steady = app.add_subcommand("steady", "stationary state of the single-mode master equation");
    add_param_flags(steady, st.params);
    steady->add_option("--g", st.coupling, "coupling strength");
    steady->add_option("--variant", st.variant, "dissipator variant");
    steady->add_option("--lowering", st.lowering, "bogoliubov | eigenbasis");
    steady->add_option("--cutoff", st.cutoff, "Fock cutoff per oscillator");
    steady->add_option("--n", st.occupation, "exciton bath occupation (flat variants)");
    steady->add_option("--temperature", st.temperature, "bath temperature (Omega variants)");
    steady->add_option("--kappa", st.kappa, "cavity loss rate (default: mode 1)");

    HopfieldOptions ho;
    auto* hopfield = app.add_subcommand("hopfield", "polariton branch table");
    add_param_flags(hopfield, ho.params);
    hopfield->add_option("--g", ho.coupling, "coupling strength");
    hopfield->add_option("--max-modes", ho.max_modes, "limit on the number of modes");

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "run the invariant checks");
    add_param_flags(verify, vo.params);
    verify->add_option("--g", vo.coupling, "coupling strength");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    return guarded(std::cerr, [&] {
        if (*spectra) return cmd_spectra(g, so, std::cout);
        if (*positivity) return cmd_positivity(g, po, std::cout);
        if (*steady) return cmd_steady(g, st, std::cout);
        if (*hopfield) return cmd_hopfield(g, ho, std::cout);
        return cmd_verify(g, vo, std::cout);
    });
}
