// protocol.cpp — vacuum-quench runs, sweeps and trajectory files
#include "uscav/master/protocol.hpp"
#include "uscav/errors.hpp"
#include "uscav/parallel.hpp"
#include "uscav/params_io.hpp"
#include "uscav/spectrum.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace uscav {

std::vector<double> record_grid(double t_end, double interval) {
    if (!(t_end > 0) || !(interval > 0)) throw ConfigError("t_end and the record interval must be > 0");
    const int n = static_cast<int>(std::llround(std::ceil(t_end / interval - 1e-9)));
    std::vector<double> t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = std::min(t_end, i * interval);
    return t;
}

ProtocolRun run_protocol(const SystemParams& p, const ProtocolOptions& opt) {
    ProtocolRun run;
    run.coupling_g = p.coupling_g;
    run.occupation = opt.occupation;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        p.validate();
        SystemParams one = p;
        one.n_modes = 1;
        const double kappa = opt.kappa ? *opt.kappa : cavity_loss_rates(one)[0];
        auto sys = std::make_shared<MasterSystem>(p, opt.cutoff_photon, opt.cutoff_exciton);
        LiouvillianOptions lo;
        lo.lowering = opt.lowering;
        const Liouvillian L =
            build_liouvillian(sys, standard_channels(opt.variant, kappa, p.gamma, opt.occupation, 0.0), lo);
        run.warnings = L.warnings();
        run.trajectory = evolve(fock_projector(sys->space(), 0, 0), L, record_grid(opt.t_end, opt.record_interval),
                                opt.evolve);
    } catch (const ConfigError& e) {
        run.error = e.what();
        run.error_code = 1;
    } catch (const std::exception& e) {
        run.error = e.what();
        run.error_code = 2;
    }
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

std::vector<ProtocolRun> run_protocol_sweep(const SystemParams& p, const std::vector<double>& couplings,
                                            const ProtocolOptions& opt, int threads) {
    std::vector<ProtocolRun> out(couplings.size());
    parallel_for(couplings.size(), threads, [&](std::size_t i) {
        SystemParams q = p;
        q.coupling_g = couplings[i];
        out[i] = run_protocol(q, opt);
    });
    return out;
}

void write_trajectory_csv(const std::string& path, const ProtocolRun& run, const SystemParams& p,
                          const ProtocolOptions& opt) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    SystemParams q = p;
    q.coupling_g = run.coupling_g;
    nlohmann::json meta = {{"params", to_json(q)},
                           {"variant", to_string(opt.variant)},
                           {"lowering", opt.lowering == LoweringSource::Bogoliubov ? "bogoliubov" : "eigenbasis"},
                           {"occupation", run.occupation},
                           {"cutoff_photon", opt.cutoff_photon},
                           {"cutoff_exciton", opt.cutoff_exciton},
                           {"step", run.trajectory.step},
                           {"richardson_error", run.trajectory.richardson_error}};
    if (opt.kappa) meta["kappa"] = *opt.kappa;
    f << version_line() << "\n# " << meta.dump() << "\n";
    f << "t,photon_number,min_eig,trace_err\n";
    for (const auto& pt : run.trajectory.points)
        f << format_double(pt.time) << ',' << format_double(pt.photon_number) << ','
          << format_double(pt.min_eigenvalue) << ',' << format_double(pt.trace_error) << '\n';
}

} // namespace uscav
