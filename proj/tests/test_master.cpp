// test_master.cpp — truncated two-mode master equations
#include "uscav/errors.hpp"
#include "uscav/master/evolve.hpp"
#include "uscav/master/steady.hpp"

#include <doctest.h>

#include <numbers>
#include <random>
#include <set>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

using namespace uscav;
using Mat = Eigen::MatrixXcd;

namespace {

const cplx I(0, 1);

Mat lowering1(int n) {
    Mat a = Mat::Zero(n + 1, n + 1);
    for (int k = 1; k <= n; ++k) a(k - 1, k) = std::sqrt(double(k));
    return a;
}

struct Dense {
    Mat a, b, H;
};

Dense dense_model(const SystemParams& p, int na, int nb) {
    Dense d;
    d.a = Eigen::kroneckerProduct(lowering1(na), Mat::Identity(nb + 1, nb + 1)).eval();
    d.b = Eigen::kroneckerProduct(Mat::Identity(na + 1, na + 1), lowering1(nb)).eval();
    const Mat ad = d.a.adjoint(), bd = d.b.adjoint();
    const double ck = std::numbers::pi / p.cav_len;
    d.H = ck * ad * d.a + p.omega_a * bd * d.b;
    if (p.gauge == Gauge::Velocity) {
        const double gc = p.coupling_g * std::sqrt(1.0 / ck);
        const Mat A = d.a + ad, Y = I * (d.b - bd);
        d.H += gc * A * Y + gc * gc * A * A;
    } else {
        const double gp = p.coupling_g * std::sqrt(ck);
        const Mat B = I * (ad - d.a), X = d.b + bd;
        d.H += gp * B * X + (gp * gp / ck) * X * X;
    }
    return d;
}

// rate (L rho L^dag - 1/2 {L^dag L, rho})
Mat lindblad(const Mat& L, const Mat& rho, double rate) {
    const Mat LdL = L.adjoint() * L;
    return rate * (L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL));
}

// 1/2 ([C, rho W^dag] + [W rho, C^dag])
Mat unified(const Mat& C, const Mat& Wd, const Mat& rho) {
    const Mat x = C * rho * Wd - rho * Wd * C;
    return 0.5 * (x + x.adjoint());
}

Mat random_state(const FockSpace& space, std::mt19937& rng) {
    std::normal_distribution<double> g;
    const int d = space.dimension();
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            m(i, k) = space.sector(i) == space.sector(k) ? cplx(g(rng), g(rng)) : cplx(0);
    Mat rho = m * m.adjoint();
    return rho / rho.trace();
}

std::shared_ptr<MasterSystem> make_system(double g, Gauge gauge, int na, int nb) {
    SystemParams p;
    p.coupling_g = g;
    p.gauge = gauge;
    return std::make_shared<MasterSystem>(p, na, nb);
}

const std::array<DissipatorVariant, 6> kAll = {
    DissipatorVariant::PhotonLindblad,     DissipatorVariant::EigenLindblad, DissipatorVariant::NonLindblad,
    DissipatorVariant::EigenLindbladOmega, DissipatorVariant::PostTraceRWA,  DissipatorVariant::NonLindbladOmega};

} // namespace

TEST_CASE("Fock space layout") {
    for (auto [na, nb] : std::array<std::pair<int, int>, 4>{{{3, 3}, {4, 2}, {2, 5}, {6, 1}}}) {
        FockSpace s(na, nb);
        CHECK(s.dimension() == (na + 1) * (nb + 1));
        CHECK(int(s.physical(0).size() + s.physical(1).size()) == s.dimension());
        std::array<std::set<int>, 2> seen;
        for (int i = 0; i < s.dimension(); ++i) {
            CHECK(s.index(s.photons(i), s.excitons(i)) == i);
            CHECK(seen[s.sector(i)].insert(s.half_index(i)).second);
            CHECK(s.half_index(i) < s.sector_size(s.sector(i)));
        }
    }
}

TEST_CASE("banded operators and Hamiltonian agree with dense construction") {
    for (Gauge gauge : {Gauge::Velocity, Gauge::Length})
        for (auto [na, nb] : std::array<std::pair<int, int>, 3>{{{4, 4}, {5, 3}, {3, 6}}}) {
            auto sys = make_system(0.7, gauge, na, nb);
            const Dense d = dense_model(sys->params(), na, nb);
            CHECK((sys->dense(sys->a()) - d.a).norm() < 1e-13);
            CHECK((sys->dense(sys->b()) - d.b).norm() < 1e-13);
            CHECK((sys->dense(sys->hamiltonian()) - d.H).norm() < 1e-12);
            CHECK((build_hamiltonian(sys->params(), sys->space()) - d.H).norm() < 1e-12);
            const auto ops = sys->a() * sys->b().adjoint();
            CHECK((sys->dense(ops) - d.a * d.b.adjoint()).norm() < 1e-13);
        }
}

TEST_CASE("energy basis diagonalizes H and transforms states both ways") {
    auto sys = make_system(0.5, Gauge::Velocity, 5, 4);
    const Dense d = dense_model(sys->params(), 5, 4);
    Eigen::SelfAdjointEigenSolver<Mat> es(d.H);
    const auto& e = sys->energy();
    std::vector<double> all;
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < e.energies[s].size(); ++i) all.push_back(e.energies[s](i));
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(std::abs(all[i] - es.eigenvalues()(i)) < 1e-10);
    CHECK(e.ground_energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
    std::mt19937 rng(1);
    const Mat rho = random_state(sys->space(), rng);
    const BlockState st = sys->from_fock(rho, Basis::Energy);
    CHECK((sys->to_fock(st, Basis::Energy) - rho).norm() < 1e-12);
    CHECK(std::abs(st.trace() - 1.0) < 1e-12);
    CHECK(fidelity_pure(Mat(sys->ground_state() * sys->ground_state().adjoint()),
                        es.eigenvectors().col(0)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("photon Lindblad generator matches the textbook form") {
    auto sys = make_system(0.6, Gauge::Velocity, 4, 5);
    const Dense d = dense_model(sys->params(), 4, 5);
    const double kappa = 0.13, gamma = 0.4, n = 0.3;
    const Liouvillian L = build_liouvillian(sys, standard_channels(DissipatorVariant::PhotonLindblad, kappa, gamma, n));
    CHECK(L.basis() == Basis::Fock);
    std::mt19937 rng(2);
    const Mat rho = random_state(sys->space(), rng);
    const Mat ref = -I * (d.H * rho - rho * d.H) + lindblad(d.a, rho, kappa) + lindblad(d.b, rho, gamma * (n + 1)) +
                    lindblad(d.b.adjoint(), rho, gamma * n);
    CHECK((L.apply_fock(rho) - ref).norm() < 1e-11);
}

TEST_CASE("non-Lindblad generator matches the explicit unified form") {
    for (Gauge gauge : {Gauge::Velocity, Gauge::Length}) {
        auto sys = make_system(0.8, gauge, 5, 5);
        const Dense d = dense_model(sys->params(), 5, 5);
        const double kappa = 0.2, gamma = 0.3, n = 0.15;
        const Liouvillian L = build_liouvillian(sys, standard_channels(DissipatorVariant::NonLindblad, kappa, gamma, n));
        const Mat Ap = sys->dense(sys->bogoliubov_lowering(CouplingOperator::CavityA));
        const Mat Xp = sys->dense(sys->bogoliubov_lowering(CouplingOperator::ExcitonX));
        const Mat A = d.a + d.a.adjoint(), X = d.b + d.b.adjoint();
        // the Bogoliubov parts reassemble the fields away from the truncation edge
        CHECK(((Ap + Ap.adjoint() - A) * Eigen::VectorXcd::Unit(A.rows(), 0)).norm() < 1e-12);
        std::mt19937 rng(3);
        const Mat rho = random_state(sys->space(), rng);
        const Mat ref = -I * (d.H * rho - rho * d.H) + unified(A, kappa * Ap.adjoint(), rho) +
                        unified(X, gamma * ((n + 1) * Xp.adjoint() + n * Xp), rho);
        CHECK((L.apply_fock(rho) - ref).norm() < 1e-11);
    }
}

TEST_CASE("eigenbasis lowering matches the generic lowering component") {
    auto sys = make_system(0.9, Gauge::Velocity, 4, 4);
    const Dense d = dense_model(sys->params(), 4, 4);
    const Mat A = d.a + d.a.adjoint();
    const LoweringResult ref = lowering_component(A, d.H);
    const double kappa = 0.3;
    LiouvillianOptions opt;
    opt.lowering = LoweringSource::Eigenbasis;
    std::vector<DissipatorSpec> specs = {{DissipatorVariant::EigenLindblad, CouplingOperator::CavityA, kappa, {}, 0.0, {}}};
    const Liouvillian L = build_liouvillian(sys, specs, opt);
    CHECK(L.basis() == Basis::Energy);
    std::mt19937 rng(4);
    const Mat rho = random_state(sys->space(), rng);
    const Mat expect = -I * (d.H * rho - rho * d.H) + lindblad(ref.matrix, rho, kappa);
    CHECK((L.apply_fock(rho) - expect).norm() < 1e-10);
}

TEST_CASE("every variant preserves trace and hermiticity, superoperator agrees") {
    std::mt19937 rng(5);
    for (auto [na, nb] : std::array<std::pair<int, int>, 2>{{{3, 4}, {4, 3}}})
        for (auto v : kAll) {
            auto sys = make_system(0.5, Gauge::Velocity, na, nb);
            const Liouvillian L = needs_eigenbasis(v) ? build_liouvillian(sys, thermal_channels(v, 0.1, 0.3, 0.7))
                                                      : build_liouvillian(sys, standard_channels(v, 0.1, 0.3, 0.2));
            const Mat rho = random_state(sys->space(), rng);
            const Mat out = L.apply_fock(rho);
            CAPTURE(to_string(v));
            CHECK(std::abs(out.trace()) < 1e-12);
            CHECK((out - out.adjoint()).norm() < 1e-12);

            // superoperator on the stacked physical sectors
            const BlockState st = L.to_state(rho);
            const BlockState ls = L.apply(st);
            const auto n = L.superoperator_sizes();
            const auto& space = sys->space();
            auto vec = [&](const BlockState& b) {
                Eigen::VectorXcd v(Eigen::Index(n[0]) * n[0] + Eigen::Index(n[1]) * n[1]);
                Eigen::Index k = 0;
                const bool pad = L.basis() == Basis::Fock && space.padded();
                for (int s = 0; s < 2; ++s)
                    for (int c = 0; c < n[s]; ++c)
                        for (int r = 0; r < n[s]; ++r)
                            v(k++) = pad ? b.b[s](space.physical(s)[r], space.physical(s)[c]) : b.b[s](r, c);
                return v;
            };
            CHECK((L.superoperator() * vec(st) - vec(ls)).norm() < 1e-11);
        }
}

TEST_CASE("variant names round trip") {
    for (auto v : kAll) CHECK(variant_from_string(to_string(v)) == v);
    CHECK_THROWS_AS(variant_from_string("bloch-redfield"), ConfigError);
    CHECK(is_lindblad(DissipatorVariant::PostTraceRWA));
    CHECK_FALSE(is_lindblad(DissipatorVariant::EigenLindbladOmega));
}

TEST_CASE("RK4 evolution follows the exact propagator") {
    auto sys = make_system(0.5, Gauge::Velocity, 3, 3);
    const Liouvillian L = build_liouvillian(sys, standard_channels(DissipatorVariant::NonLindblad, 0.2, 0.5, 0.0));
    const DensityMatrix rho0 = fock_projector(sys->space(), 0, 0);
    EvolveOptions opt;
    opt.step = 0.05;
    opt.richardson_tol = 1e-10;
    const Trajectory tr = evolve(rho0, L, {0.0, 0.5, 1.0, 2.0}, opt);
    CHECK(tr.step <= 0.05);
    CHECK(tr.richardson_error <= 1e-10);
    REQUIRE(tr.points.size() == 4);

    // exact: vec(rho(t)) = exp(M t) vec(rho0) on the physical sectors
    const Mat M = L.superoperator();
    const auto n = L.superoperator_sizes();
    Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(M.rows());
    v0(0) = 1.0; // |0,0> is physical index 0 of the even sector
    const Eigen::VectorXcd v = (M * 2.0).exp() * v0;
    const BlockState fin = L.to_state(tr.final_state.matrix);
    const auto& space = sys->space();
    double err = 0;
    for (int c = 0; c < n[0]; ++c)
        for (int r = 0; r < n[0]; ++r)
            err = std::max(err, std::abs(fin.b[0](space.physical(0)[r], space.physical(0)[c]) - v(c * n[0] + r)));
    CHECK(err < 1e-8);
    CHECK(tr.max_trace_error() < 1e-12);
    CHECK(tr.points[0].photon_number == doctest::Approx(0.0));
    const double ref_n = (L.system().dense(L.photon_number()) * tr.final_state.matrix).trace().real();
    CHECK(tr.points.back().photon_number == doctest::Approx(ref_n).epsilon(1e-12));
    CHECK(tr.points.back().min_eigenvalue == doctest::Approx(min_eigenvalue(tr.final_state.matrix)).epsilon(1e-10));
    CHECK_THROWS_AS(evolve(rho0, L, {0.0, 1.0, 0.5}), DomainError);
}

TEST_CASE("steady states") {
    SUBCASE("vacuum for bare-operator damping without coupling") {
        auto sys = make_system(0.0, Gauge::Velocity, 4, 4);
        const Liouvillian L = build_liouvillian(sys, standard_channels(DissipatorVariant::PhotonLindblad, 0.1, 0.5, 0.0));
        const SteadyState ss = steady_state(L);
        CHECK(std::abs(ss.rho.matrix(0, 0) - 1.0) < 1e-10);
        CHECK(ss.residual < 1e-10);
    }
    SUBCASE("thermal exciton population") {
        auto sys = make_system(0.0, Gauge::Velocity, 2, 10);
        const double n = 0.1;
        const Liouvillian L = build_liouvillian(sys, standard_channels(DissipatorVariant::PhotonLindblad, 1e-3, 0.5, n));
        const SteadyState ss = steady_state(L);
        const Mat nb = sys->dense(sys->b().adjoint() * sys->b());
        CHECK((nb * ss.rho.matrix).trace().real() == doctest::Approx(n).epsilon(1e-8));
    }
    SUBCASE("conserved photon number makes the stationary state ambiguous") {
        auto sys = make_system(0.0, Gauge::Velocity, 2, 3);
        const Liouvillian L = build_liouvillian(sys, standard_channels(DissipatorVariant::PhotonLindblad, 0.0, 0.5, 0.1));
        CHECK_THROWS_AS(steady_state(L), AmbiguityError);
    }
    SUBCASE("non-Lindblad damping at zero temperature relaxes to the dressed ground state") {
        // exact with the truncated-eigenbasis lowering operator
        auto sys = make_system(0.5, Gauge::Velocity, 6, 6);
        LiouvillianOptions opt;
        opt.lowering = LoweringSource::Eigenbasis;
        const auto specs = standard_channels(DissipatorVariant::NonLindblad, 0.05, 0.5, 0.0);
        const SteadyState ss = steady_state(build_liouvillian(sys, specs, opt));
        CHECK(fidelity_pure(ss.rho.matrix, sys->ground_state()) > 1 - 1e-12);
        // the Bogoliubov operator carries a truncation error that shrinks with the cutoff
        double prev = 1;
        for (int n : {3, 5, 7}) {
            auto s2 = make_system(0.5, Gauge::Velocity, n, n);
            const double loss = 1 - fidelity_pure(steady_state(build_liouvillian(s2, specs)).rho.matrix, s2->ground_state());
            CHECK(loss < prev);
            prev = loss;
        }
        CHECK(prev < 1e-4);
    }
    SUBCASE("relaxation fallback agrees with the direct solve") {
        auto sys = make_system(0.3, Gauge::Velocity, 3, 3);
        const Liouvillian L = build_liouvillian(sys, standard_channels(DissipatorVariant::PhotonLindblad, 0.5, 0.5, 0.2));
        const SteadyState direct = steady_state(L);
        SteadyStateOptions opt;
        opt.max_dense = 1;
        opt.step = 0.05;
        const SteadyState relaxed = steady_state(L, opt);
        CHECK(relaxed.relaxed);
        CHECK((direct.rho.matrix - relaxed.rho.matrix).norm() < 1e-8);
    }
}

TEST_CASE("Gibbs state is stationary for the transition-resolved dissipators") {
    const double T = 0.5;
    for (auto v : {DissipatorVariant::EigenLindbladOmega, DissipatorVariant::NonLindbladOmega,
                   DissipatorVariant::PostTraceRWA}) {
        auto sys = make_system(0.5, Gauge::Velocity, 5, 5);
        const Liouvillian L = build_liouvillian(sys, thermal_channels(v, 0.05, 0.5, T));
        CAPTURE(to_string(v));
        CHECK(gibbs_residual(L, T) < 1e-10);
        const SteadyState ss = steady_state(L);
        CHECK(fidelity(ss.rho.matrix, sys->gibbs_state(T)) > 1 - 1e-8);
    }
    auto sys = make_system(0.5, Gauge::Velocity, 3, 3);
    const Liouvillian L = build_liouvillian(sys, thermal_channels(DissipatorVariant::NonLindbladOmega, 0.05, 0.5, T));
    CHECK_THROWS_AS(gibbs_residual(L, 0.0), DomainError);
    // flat-occupation Lindblad damping does not thermalize the dressed system
    const Liouvillian P = build_liouvillian(sys, standard_channels(DissipatorVariant::PhotonLindblad, 0.05, 0.5, bose(1.0, T)));
    CHECK(gibbs_residual(P, T) > 1e-4);
}

TEST_CASE("helpers") {
    CHECK(bose(1.0, 0.5) == doctest::Approx(1.0 / (std::exp(2.0) - 1.0)));
    CHECK_THROWS_AS(bose(1.0, 0.0), DomainError);
    Mat r = Mat::Zero(2, 2);
    r(0, 0) = 0.25;
    r(1, 1) = 0.75;
    CHECK(fidelity(r, r) == doctest::Approx(1.0));
    Mat s = Mat::Zero(2, 2);
    s(0, 0) = 1.0;
    CHECK(fidelity(r, s) == doctest::Approx(0.25));
    CHECK(min_eigenvalue(r) == doctest::Approx(0.25));
}

TEST_CASE("lowering component limits") {
    SUBCASE("no coupling: the bare annihilation operator") {
        SystemParams p;
        p.coupling_g = 0.0;
        p.cav_len = std::numbers::pi / 1.3; // ck = 1.3, no degeneracy with omega_a
        const Dense d = dense_model(p, 4, 4);
        const LoweringResult r = lowering_component(d.a + d.a.adjoint(), d.H);
        CHECK((r.matrix - d.a).norm() < 1e-10);
    }
    SUBCASE("annihilates the ground state, departs from a at strong coupling") {
        SystemParams p;
        p.coupling_g = 1.0;
        const Dense d = dense_model(p, 24, 24);
        Eigen::SelfAdjointEigenSolver<Mat> es(d.H);
        const Eigen::VectorXcd g = es.eigenvectors().col(0);
        const LoweringResult r = lowering_component(d.a + d.a.adjoint(), d.H);
        CHECK((r.matrix * g).norm() < 1e-10);
        CHECK((r.matrix - d.a).norm() > 0.1);
        // virtual photons in the dressed vacuum
        CHECK((g.adjoint() * d.a.adjoint() * d.a * g)(0).real() > 1e-3);
    }
}

TEST_CASE("spectrum of the uncoupled Hamiltonian") {
    auto sys = make_system(0.0, Gauge::Velocity, 3, 4);
    std::vector<double> expect, got;
    for (int na = 0; na <= 3; ++na)
        for (int nb = 0; nb <= 4; ++nb) expect.push_back(na * sys->ck() + nb * sys->params().omega_a);
    for (int s = 0; s < 2; ++s)
        for (double e : sys->energy().energies[s]) got.push_back(e);
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("dressed ground state is stationary under the non-Lindblad generator") {
    auto sys = make_system(1.0, Gauge::Velocity, 6, 6);
    LiouvillianOptions opt;
    opt.lowering = LoweringSource::Eigenbasis;
    const Liouvillian L = build_liouvillian(sys, standard_channels(DissipatorVariant::NonLindblad, 0.01, 0.5, 0.0), opt);
    const Eigen::VectorXcd g = sys->ground_state();
    CHECK(L.apply_fock(g * g.adjoint()).norm() < 1e-12);
}

TEST_CASE("eigen-Lindblad and non-Lindblad generators share their secular part") {
    // The counter-rotating part of the non-Lindblad form, 1/2 kappa ([a^dag, rho a^dag] + [a rho, a]),
    // survives at zero coupling; it only links coherences whose frequencies differ by about 2 omega.
    // The difference is 1/2 kappa ([A-, rho A-] + [A+ rho, A+]) at any G, so the secular blocks
    // (equal Bohr frequencies) of the two generators coincide exactly.
    for (double g : {1e-2, 1e-4, 1e-6}) {
        SystemParams p;
        p.coupling_g = g;
        p.cav_len = std::numbers::pi / 1.3;
        auto sys = std::make_shared<MasterSystem>(p, 3, 3);
        LiouvillianOptions opt;
        opt.lowering = LoweringSource::Eigenbasis;
        opt.basis = Basis::Energy;
        const Liouvillian E = build_liouvillian(sys, standard_channels(DissipatorVariant::EigenLindblad, 0.1, 0.3, 0.0), opt);
        const Liouvillian N = build_liouvillian(sys, standard_channels(DissipatorVariant::NonLindblad, 0.1, 0.3, 0.0), opt);
        const Mat diff = E.superoperator() - N.superoperator();
        const auto n = E.superoperator_sizes();
        std::vector<double> freq;
        for (int s = 0; s < 2; ++s)
            for (int c = 0; c < n[s]; ++c)
                for (int r = 0; r < n[s]; ++r)
                    freq.push_back(sys->energy().energies[s](r) - sys->energy().energies[s](c));
        double secular = 0, other = 0;
        for (Eigen::Index i = 0; i < diff.rows(); ++i)
            for (Eigen::Index k = 0; k < diff.cols(); ++k) {
                const double v = std::norm(diff(i, k));
                (std::abs(freq[i] - freq[k]) < 0.1 ? secular : other) += v;
            }
        CHECK(std::sqrt(other) > 0.01);
        CHECK(std::sqrt(secular) < 1e-12);
    }
}

TEST_CASE("flat occupation does not thermalize the non-Lindblad generator at strong coupling") {
    const double T = 0.5;
    auto sys = make_system(1.0, Gauge::Velocity, 5, 5);
    const Liouvillian L =
        build_liouvillian(sys, standard_channels(DissipatorVariant::NonLindblad, 0.05, 0.5, bose(1.0, T)));
    CHECK(gibbs_residual(L, T) > 1e-4);
}

TEST_CASE("minimum eigenvalue of the maximally mixed state") {
    FockSpace s(3, 2);
    const Mat rho = Mat::Identity(s.dimension(), s.dimension()) / double(s.dimension());
    CHECK(min_eigenvalue(rho) == doctest::Approx(1.0 / s.dimension()));
}
