// commands.hpp — the command implementations behind the uscav tool
//
// Each cmd_* returns a process exit code (see ExitCode) and writes its files
// under GlobalOptions::out. Argument parsing lives in tools/main.cpp.
#pragma once

#include "uscav/master/liouvillian.hpp"
#include "uscav/model.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uscav::cli {

enum ExitCode { kSuccess = 0, kUsage = 1, kNumerical = 2, kInvariant = 3 };

struct GlobalOptions {
    std::string config;  // key = value file, optional
    std::string out = "."; // output directory, created if missing
    int threads = 0;     // 0: hardware concurrency
    std::string grid;    // "min:max:count"; empty: command default
};

// command-line overrides on top of the config file
struct ParamOverrides {
    std::optional<double> gamma, lambda0, cav_len, omega_a, n_env;
    std::optional<int> modes;
    std::optional<std::string> gauge;
};

// config file (if any), then overrides, then validate(); throws ConfigError
SystemParams resolve_params(const GlobalOptions& g, const ParamOverrides& o);
// the couplings to run: `list` if given, else the resolved coupling_g
std::vector<double> resolve_couplings(const SystemParams& p, const std::vector<double>& list);

struct SpectraOptions {
    ParamOverrides params;
    std::vector<std::string> methods = {"mbc"}; // mbc, mbc-l, langevin-{nl,l}-{nl,l}
    std::vector<double> couplings;
    bool diff = false;           // also write the normalized-difference curve
    std::string solver = "reduced"; // reduced | dense
    bool no_mixing = false;
};

struct PositivityOptions {
    ParamOverrides params;
    std::vector<double> couplings = {0.01, 0.1, 0.2, 0.5, 1.0};
    std::vector<double> occupations = {0.0};
    std::string variant = "non-lindblad";
    std::string lowering = "bogoliubov";
    int cutoff = 24;
    std::optional<double> kappa;
    double t_end = 20.0;
    double record_interval = 0.25;
    double step = 0.01;
    std::optional<double> richardson_tol; // default depends on the variant
    bool no_step_check = false;
    std::string integrator = "lawson"; // lawson | rk4
};

struct SteadyOptions {
    ParamOverrides params;
    std::optional<double> coupling;
    std::string variant = "non-lindblad";
    std::string lowering = "eigenbasis";
    int cutoff = 8;
    double occupation = 0.0;
    std::optional<double> temperature; // required by the Omega variants
    std::optional<double> kappa;
};

struct HopfieldOptions {
    ParamOverrides params;
    std::optional<double> coupling;
    int max_modes = 0; // 0: all n_modes
};

struct VerifyOptions {
    ParamOverrides params;
    std::optional<double> coupling;
};

int cmd_spectra(const GlobalOptions& g, const SpectraOptions& o, std::ostream& log);
int cmd_positivity(const GlobalOptions& g, const PositivityOptions& o, std::ostream& log);
int cmd_steady(const GlobalOptions& g, const SteadyOptions& o, std::ostream& log);
int cmd_hopfield(const GlobalOptions& g, const HopfieldOptions& o, std::ostream& log);
int cmd_verify(const GlobalOptions& g, const VerifyOptions& o, std::ostream& log);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0;     // measured deviation
    double threshold = 0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;

    bool passed() const;
    nlohmann::json to_json() const;
};

// the invariant suite run by `verify`
VerifyReport run_verify(const SystemParams& p, int threads = 0);

// call from a catch block: prints the message, returns the exit code class
int exit_code_for_current_exception(std::ostream& err);

// runs fn and maps exceptions onto exit codes
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

std::string output_path(const GlobalOptions& g, const std::string& name);
std::string tag(double v); // compact number for file names

LoweringSource lowering_from_string(const std::string& s);
std::string to_string(LoweringSource s);

} // namespace uscav::cli
