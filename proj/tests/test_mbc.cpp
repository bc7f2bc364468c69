// test_mbc.cpp — macroscopic boundary-condition reflection
#include "uscav/errors.hpp"
#include "uscav/mbc.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <random>

using namespace uscav;

namespace {

// field matching: e^{iwx} + r e^{-iwx} for x < 0, A sin(n w (l - x)) inside,
// derivative jump -Lambda w E(0) across the mirror at x = 0
cplx matched_reflection(double w, cplx n, double lam, double ell) {
    const cplx I(0, 1);
    const cplx s = std::sin(n * w * ell), c = std::cos(n * w * ell);
    Eigen::Matrix2cd M;
    M << 1.0, -s, I + lam, -n * c;
    const Eigen::Vector2cd rhs(-1.0, I - lam);
    return M.partialPivLu().solve(rhs)(0);
}

} // namespace

TEST_CASE("reflection matches direct field matching") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int i = 0; i < 500; ++i) {
        SystemParams p;
        p.lambda0 = 0.2 + 20 * u(rng);
        p.cav_len = u(rng);
        const double w = u(rng);
        const cplx n(u(rng), u(rng) / 4);
        const cplx ref = matched_reflection(w, n, mirror_lambda(p, w), p.cav_len);
        const ReflectionPoint pt = reflection_for_index(p, w, n);
        CHECK(std::abs(pt.r - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
        CHECK(std::abs(pt.absorption - (1 - std::norm(pt.r))) < 1e-12);
    }
}

TEST_CASE("lossless medium reflects with unit modulus") {
    SystemParams p;
    p.gamma = 0;
    for (int i = 0; i < 200; ++i) {
        const double w = 0.05 + 2.45 * i / 199.0;
        if (std::abs(w - 1.0) < 1e-9) continue;
        CHECK(std::abs(std::abs(reflection_coefficient(p, w)) - 1.0) < 1e-8);
    }
}

TEST_CASE("absorbing medium stays passive") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        SystemParams p;
        p.coupling_g = 2 * u(rng);
        p.gamma = 0.01 + u(rng);
        p.lambda0 = std::pow(10.0, 1 + 3 * u(rng));
        const auto t = absorption_spectrum(p, linear_grid(0.05, 2.5, 200), Treatment::NonLindblad, 2);
        for (const auto& row : t.rows) {
            REQUIRE(row.flag == RowFlag::Ok);
            CHECK(row.absorption >= 0.0);
            CHECK(row.absorption <= 1.0);
        }
    }
}

TEST_CASE("damped dispersion with Lindblad damping") {
    SystemParams p;
    p.coupling_g = 0.5;
    p.gamma = 0;
    // without damping the root is the bulk polariton s = w^2 eps(w)
    for (double w : {0.3, 0.8, 1.6, 2.2}) {
        const DispersionRoot r = lindblad_damping_dispersion(p, w);
        const cplx s_ref = w * w * dielectric(p, w).value;
        if (s_ref.real() > 0) CHECK(std::abs(r.k * r.k - s_ref) < 1e-8 * std::abs(s_ref));
    }
    p.gamma = 0.3;
    const auto grid = linear_grid(0.1, 2.5, 120);
    const auto branch = lindblad_damping_branch(p, grid);
    int ok = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!branch[i]) continue;
        ++ok;
        CHECK(branch[i]->k.imag() >= 0);
        const cplx s = branch[i]->k * branch[i]->k;
        CHECK(std::abs(lindblad_damping_determinant(p, grid[i], s)) < 1e-9);
    }
    CHECK(ok > 100);
    const auto t = absorption_spectrum(p, grid, Treatment::Lindblad, 2);
    CHECK(t.damping == to_string(Treatment::Lindblad));
    for (const auto& row : t.rows)
        if (row.flag == RowFlag::Ok) CHECK(row.absorption >= -kAbsorptionSlack);
}

TEST_CASE("grid handling") {
    CHECK(parse_grid("0.5:2.5:5") == std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5});
    CHECK_THROWS_AS(parse_grid("0.5:2.5"), ConfigError);
    CHECK_THROWS_AS(parse_grid("2:1:4"), ConfigError);
    CHECK_THROWS(check_grid({0.0, 1.0}));
}
