// test_protocol.cpp — vacuum-quench runs, record grids and trajectory files
#include "uscav/errors.hpp"
#include "uscav/master/protocol.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace uscav;

namespace {

ProtocolOptions small(double t_end = 2.0) {
    ProtocolOptions o;
    o.cutoff_photon = o.cutoff_exciton = 5;
    o.t_end = t_end;
    o.evolve.richardson_tol = 1e-8;
    return o;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("record grid") {
    const auto t = record_grid(1.0, 0.25);
    REQUIRE(t.size() == 5);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 1.0);
    CHECK(record_grid(1.0, 0.3).back() == 1.0);
    CHECK_THROWS_AS(record_grid(0.0, 0.1), ConfigError);
}

TEST_CASE("no coupling: the vacuum stays put") {
    SystemParams p;
    p.coupling_g = 0.0;
    const ProtocolRun run = run_protocol(p, small());
    REQUIRE(run.error.empty());
    for (const auto& pt : run.trajectory.points) {
        CHECK(std::abs(pt.photon_number) < 1e-14);
        CHECK(std::abs(pt.min_eigenvalue) < 1e-14);
    }
    CHECK(run.trajectory.max_violation() == 0.0);
}

TEST_CASE("non-Lindblad quench goes negative, Lindblad does not") {
    SystemParams p;
    p.coupling_g = 0.5;
    ProtocolOptions o = small();
    const ProtocolRun nl = run_protocol(p, o);
    REQUIRE(nl.error.empty());
    CHECK(nl.trajectory.max_violation() > 1e-3);
    CHECK(nl.trajectory.max_trace_error() < 1e-12);
    o.variant = DissipatorVariant::PhotonLindblad;
    const ProtocolRun pl = run_protocol(p, o);
    REQUIRE(pl.error.empty());
    CHECK(pl.trajectory.max_violation() < 1e-9);
    // a warm exciton bath fills in the negative direction
    o.variant = DissipatorVariant::NonLindblad;
    o.occupation = 0.1;
    const ProtocolRun warm = run_protocol(p, o);
    CHECK(warm.trajectory.integrated_violation() < nl.trajectory.integrated_violation());
}

TEST_CASE("sweep keeps order, records failures and is thread independent") {
    SystemParams p;
    ProtocolOptions o = small(1.0);
    const std::vector<double> gs = {0.1, 0.5, 0.3};
    const auto one = run_protocol_sweep(p, gs, o, 1);
    const auto three = run_protocol_sweep(p, gs, o, 3);
    REQUIRE(one.size() == 3);
    const auto dir = std::filesystem::temp_directory_path() / "uscav_test_protocol";
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < gs.size(); ++i) {
        CHECK(one[i].coupling_g == gs[i]);
        const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
        write_trajectory_csv(a, one[i], p, o);
        write_trajectory_csv(b, three[i], p, o);
        CHECK(slurp(a) == slurp(b));
    }
    const std::string text = slurp((dir / "a.csv").string());
    CHECK(text.rfind("# uscav ", 0) == 0);
    CHECK(text.find("\"coupling_g\":0.3") != std::string::npos);
    CHECK(text.find("t,photon_number,min_eig,trace_err\n") != std::string::npos);

    o.evolve.min_step = 0.5; // forces the step check to give up
    o.evolve.richardson_tol = 1e-30;
    const auto bad = run_protocol_sweep(p, {0.5}, o, 1);
    CHECK_FALSE(bad[0].error.empty());
    CHECK(bad[0].error_code == 2);
}
