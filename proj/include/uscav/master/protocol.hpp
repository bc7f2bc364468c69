// protocol.hpp — the vacuum-quench positivity protocol on the lowest cavity mode
#pragma once

#include "uscav/master/evolve.hpp"

#include <string>
#include <vector>

namespace uscav {

struct ProtocolOptions {
    int cutoff_photon = 24;
    int cutoff_exciton = 24;
    DissipatorVariant variant = DissipatorVariant::NonLindblad;
    LoweringSource lowering = LoweringSource::Bogoliubov;
    double occupation = 0.0;   // exciton bath; the cavity bath stays at zero temperature
    std::optional<double> kappa; // default: loss rate of mode 1 from the parameters
    double t_end = 20.0;
    double record_interval = 0.25;
    EvolveOptions evolve;
};

struct ProtocolRun {
    double coupling_g = 0;
    double occupation = 0;
    Trajectory trajectory;
    std::vector<std::string> warnings;
    std::string error; // non-empty if the run failed
    int error_code = 0; // process exit-code class of the failure
    double seconds = 0;
};

std::vector<double> record_grid(double t_end, double interval);

// rho0 = |0,0><0,0| evolved under the chosen dissipators
ProtocolRun run_protocol(const SystemParams& p, const ProtocolOptions& opt);

// one run per coupling in parallel; failures are recorded per run
std::vector<ProtocolRun> run_protocol_sweep(const SystemParams& p, const std::vector<double>& couplings,
                                            const ProtocolOptions& opt, int threads = 0);

void write_trajectory_csv(const std::string& path, const ProtocolRun& run, const SystemParams& p,
                          const ProtocolOptions& opt);

} // namespace uscav
