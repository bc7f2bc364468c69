// verify.cpp — invariant suite behind `uscav verify`
#include "uscav/cli/commands.hpp"
#include "uscav/errors.hpp"
#include "uscav/hopfield.hpp"
#include "uscav/langevin.hpp"
#include "uscav/master/steady.hpp"
#include "uscav/mbc.hpp"
#include "uscav/params_io.hpp"
#include "uscav/spectrum.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace uscav::cli {

namespace {

constexpr int kVerifyModes = 50; // mode-sum checks use at most this many modes

CheckResult check(std::string name, double value, double threshold, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.value = value;
    c.threshold = threshold;
    c.passed = std::isfinite(value) && value <= threshold;
    c.detail = std::move(detail);
    return c;
}

SystemParams truncated(SystemParams p) {
    p.n_modes = std::min(p.n_modes, kVerifyModes);
    return p;
}

// max ||r| - 1| over unflagged rows
CheckResult unitarity(const std::string& name, const SpectrumTable& t) {
    double worst = 0;
    std::size_t used = 0;
    for (const auto& row : t.rows) {
        if (row.flag != RowFlag::Ok) continue;
        worst = std::max(worst, std::abs(std::abs(row.r) - 1.0));
        ++used;
    }
    return check(name, used ? worst : NAN, 1e-8,
                 std::to_string(used) + " of " + std::to_string(t.rows.size()) + " frequencies");
}

} // namespace

bool VerifyReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json j = {{"version", USCAV_VERSION}, {"passed", passed()}, {"warnings", warnings}};
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr)},
                               {"threshold", c.threshold},
                               {"detail", c.detail}});
    return j;
}

VerifyReport run_verify(const SystemParams& params, int threads) {
    VerifyReport rep;
    rep.warnings = diagnostics(params);
    const SystemParams p = truncated(params);

    // Hopfield: symplectic normalization, closed-form frequencies, gauge agreement
    {
        SystemParams vel = p, len = p;
        vel.gauge = Gauge::Velocity;
        len.gauge = Gauge::Length;
        const auto mv = diagonalize_all(vel, threads);
        const auto ml = diagonalize_all(len, threads);
        double norm = 0, closed = 0, gauge = 0;
        for (std::size_t j = 0; j < mv.size(); ++j) {
            const auto w = polariton_frequencies(p, mode_wavenumber(p, int(j) + 1));
            for (int z = 0; z < 2; ++z) {
                norm = std::max({norm, std::abs(mv[j][z].symplectic_norm() - 1), std::abs(ml[j][z].symplectic_norm() - 1)});
                closed = std::max(closed, std::abs(mv[j][z].omega - w[z]) / w[z]);
                gauge = std::max(gauge, std::abs(mv[j][z].omega - ml[j][z].omega) / w[z]);
            }
        }
        rep.checks.push_back(check("hopfield-symplectic-norm", norm, 1e-10));
        rep.checks.push_back(check("hopfield-closed-form", closed, 1e-10));
        rep.checks.push_back(check("gauge-frequencies", gauge, 1e-10));
    }

    const auto grid = linear_grid(0.05, 2.45, 200);

    // gauge invariance of the Langevin absorption
    {
        SystemParams vel = p, len = p;
        vel.gauge = Gauge::Velocity;
        len.gauge = Gauge::Length;
        const auto coarse = linear_grid(0.05, 2.45, 40);
        const auto a = langevin_spectrum(vel, coarse, Treatment::NonLindblad, Treatment::NonLindblad, {}, threads);
        const auto b = langevin_spectrum(len, coarse, Treatment::NonLindblad, Treatment::NonLindblad, {}, threads);
        double worst = 0;
        for (std::size_t i = 0; i < coarse.size(); ++i)
            if (a.rows[i].flag == RowFlag::Ok && b.rows[i].flag == RowFlag::Ok)
                worst = std::max(worst, std::abs(a.rows[i].absorption - b.rows[i].absorption));
        rep.checks.push_back(check("gauge-absorption", worst, 1e-6));
    }

    // lossless medium: |r| = 1 for every method
    {
        SystemParams lossless = p;
        lossless.gamma = 0;
        rep.checks.push_back(unitarity("unitarity-mbc", absorption_spectrum(lossless, grid, Treatment::NonLindblad, threads)));
        for (auto cav : {Treatment::NonLindblad, Treatment::Lindblad})
            rep.checks.push_back(unitarity("unitarity-" + method_label(cav, Treatment::NonLindblad),
                                           langevin_spectrum(lossless, grid, cav, Treatment::NonLindblad, {}, threads)));
    }

    // passivity at the given parameters
    {
        const auto m = absorption_spectrum(p, grid, Treatment::NonLindblad, threads);
        const auto l = langevin_spectrum(p, grid, Treatment::NonLindblad, Treatment::NonLindblad, {}, threads);
        double worst = 0;
        for (const auto& row : m.rows)
            if (row.flag == RowFlag::Ok) worst = std::max({worst, -row.absorption, row.absorption - 1.0});
        for (const auto& row : l.rows)
            if (row.flag == RowFlag::Ok) worst = std::max(worst, -row.absorption);
        rep.checks.push_back(check("passivity", worst, kAbsorptionSlack));
    }

    // dense vs rank-one reduced solve
    {
        const auto blocks = assemble_blocks(p, Treatment::Lindblad, Treatment::NonLindblad, threads);
        SolveOptions dense, reduced;
        dense.method = SolveMethod::Dense;
        double worst = 0;
        for (double w : linear_grid(0.1, 2.4, 20))
            worst = std::max(worst, std::abs(solve_frequency(blocks, w, dense).r - solve_frequency(blocks, w, reduced).r));
        rep.checks.push_back(check("dense-vs-reduced", worst, 1e-9));
    }

    // bulk dispersion of the Langevin blocks against the dielectric function
    {
        double worst = 0;
        for (double w : linear_grid(0.1, 2.4, 20)) {
            const cplx eps = dielectric(p, w).value;
            worst = std::max(worst, std::abs(infinite_medium_check(p, w) - eps) / std::abs(eps));
        }
        rep.checks.push_back(check("dispersion", worst, 1e-9));
    }

    // thermal state is stationary for the transition-resolved generators
    {
        constexpr double temperature = 0.5;
        SystemParams one = p;
        one.n_modes = 1;
        const double kappa = cavity_loss_rates(one)[0];
        auto sys = std::make_shared<MasterSystem>(p, 5, 5);
        for (auto v : {DissipatorVariant::EigenLindbladOmega, DissipatorVariant::PostTraceRWA,
                       DissipatorVariant::NonLindbladOmega}) {
            const Liouvillian L = build_liouvillian(sys, thermal_channels(v, kappa, p.gamma, temperature));
            rep.checks.push_back(check("gibbs-" + to_string(v), gibbs_residual(L, temperature), 1e-8,
                                       "cutoff 5, T = 0.5"));
        }
    }
    return rep;
}

int cmd_verify(const GlobalOptions& g, const VerifyOptions& o, std::ostream& log) {
    SystemParams p = resolve_params(g, o.params);
    if (o.coupling) p.coupling_g = *o.coupling;
    p.validate();
    const VerifyReport rep = run_verify(p, g.threads);
    auto j = rep.to_json();
    j["params"] = to_json(p);
    std::ofstream f(output_path(g, "verify.json"));
    if (!f) throw ConfigError("cannot write verify.json");
    f << j.dump(2) << '\n';

    for (const auto& w : rep.warnings) log << "warning: " << w << '\n';
    for (const auto& c : rep.checks)
        log << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << format_double(c.value) << " <= "
            << format_double(c.threshold) << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
    if (!rep.passed()) {
        log << "failed:";
        for (const auto& c : rep.checks)
            if (!c.passed) log << ' ' << c.name;
        log << '\n';
        return kInvariant;
    }
    log << "all " << rep.checks.size() << " checks passed\n";
    return kSuccess;
}

} // namespace uscav::cli
