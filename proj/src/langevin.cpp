// langevin.cpp — block assembly, rank-one closure over modes, dense reference
#include "uscav/langevin.hpp"
#include "uscav/errors.hpp"
#include "uscav/parallel.hpp"

#include <cmath>

namespace uscav {

namespace {

const cplx I(0.0, 1.0);
constexpr int kA = 0;
constexpr int kX = 2;

// ck may be complex for the analytic continuation in infinite_medium_check
Eigen::Matrix4cd free_block_c(const SystemParams& p, cplx ck) {
    const double wa = p.omega_a;
    const double g = p.coupling_g;
    Eigen::Matrix4cd m;
    if (p.gauge == Gauge::Velocity) {
        const cplx gc = g * wa * std::sqrt(wa / ck);
        m << 0.0, -ck, 0.0, 0.0,
             ck + 4.0 * gc * gc / wa, 0.0, 0.0, 2.0 * gc,
             -2.0 * gc, 0.0, 0.0, -wa,
             0.0, 0.0, wa, 0.0;
    } else {
        const cplx gp = g * ck * std::sqrt(wa / ck);
        m << 0.0, -ck, 2.0 * gp, 0.0,
             ck, 0.0, 0.0, 0.0,
             0.0, 0.0, 0.0, -wa,
             0.0, -2.0 * gp, wa + 4.0 * gp * gp / ck, 0.0;
    }
    return m;
}

bool finite(const Eigen::Vector4cd& v) { return v.allFinite(); }

void finish(ScatteringSolution& s) {
    s.r = 1.0 + s.delta;
    s.absorption = -2.0 * s.delta.real() - std::norm(s.delta);
}

ScatteringSolution solve_reduced(const BlockMatrixSet& b, double omega, const SolveOptions& opt) {
    const std::size_t J = b.modes();
    ScatteringSolution sol;
    sol.omega = omega;
    sol.alpha.resize(J);

    std::vector<cplx> u0(J), w0(J);
    const double sg = std::sqrt(b.gamma);
    cplx c_sum = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        Eigen::PartialPivLU<Eigen::Matrix4cd> lu(b.block(j, omega));
        const Eigen::Vector4cd u = lu.solve(b.m_kappa[j]);
        if (!finite(u)) throw SingularPointError("singular mode block", omega);
        u0[j] = u(kA);
        if (opt.compute_noise) w0[j] = sg * lu.solve(b.m_gamma[j])(kA);
        c_sum += 0.5 * b.kappa[j] * u0[j];
    }

    if (opt.mode_mixing) {
        const cplx one_minus = 1.0 - c_sum;
        if (std::abs(one_minus) < 1e-30) throw SingularPointError("port closure singular", omega);
        for (std::size_t j = 0; j < J; ++j) sol.alpha[j] = std::sqrt(b.kappa[j]) * u0[j] / one_minus;
        sol.delta = 2.0 * c_sum / one_minus;
        if (opt.compute_noise) {
            sol.beta = Eigen::MatrixXcd::Zero(J, J);
            for (std::size_t j = 0; j < J; ++j) {
                sol.beta(j, j) = w0[j];
                const cplx lead = std::sqrt(b.kappa[j]) * u0[j] / one_minus;
                for (std::size_t k = 0; k < J; ++k)
                    sol.beta(j, k) += lead * 0.5 * std::sqrt(b.kappa[k]) * w0[k];
            }
        }
    } else {
        sol.delta = 0.0;
        if (opt.compute_noise) sol.beta = Eigen::MatrixXcd::Zero(J, J);
        for (std::size_t j = 0; j < J; ++j) {
            const cplx cj = 0.5 * b.kappa[j] * u0[j];
            const cplx one_minus = 1.0 - cj;
            if (std::abs(one_minus) < 1e-30) throw SingularPointError("port closure singular", omega);
            sol.alpha[j] = std::sqrt(b.kappa[j]) * u0[j] / one_minus;
            sol.delta += 2.0 * cj / one_minus;
            if (opt.compute_noise)
                sol.beta(j, j) = w0[j] + cj * w0[j] / one_minus;
        }
    }
    finish(sol);
    return sol;
}

ScatteringSolution solve_dense(const BlockMatrixSet& b, double omega, const SolveOptions& opt) {
    const Eigen::Index J = static_cast<Eigen::Index>(b.modes());
    const Eigen::Index n = 4 * J;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    const Eigen::Index nrhs = opt.compute_noise ? 1 + J : 1;
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, nrhs);
    const double sg = std::sqrt(b.gamma);
    for (Eigen::Index j = 0; j < J; ++j) {
        M.block<4, 4>(4 * j, 4 * j) = b.block(j, omega);
        for (Eigen::Index k = 0; k < J; ++k) {
            if (!opt.mode_mixing && k != j) continue;
            const double coef = 0.5 * std::sqrt(b.kappa[j] * b.kappa[k]);
            M.block<4, 1>(4 * j, 4 * k + kA) -= coef * b.m_kappa[j];
        }
        rhs.block<4, 1>(4 * j, 0) = std::sqrt(b.kappa[j]) * b.m_kappa[j];
        if (opt.compute_noise) rhs.block<4, 1>(4 * j, 1 + j) = sg * b.m_gamma[j];
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    const Eigen::MatrixXcd v = lu.solve(rhs);
    if (!v.allFinite()) throw SingularPointError("singular dense system", omega);

    ScatteringSolution sol;
    sol.omega = omega;
    sol.alpha.resize(J);
    sol.delta = 0.0;
    for (Eigen::Index j = 0; j < J; ++j) {
        sol.alpha[j] = v(4 * j + kA, 0);
        sol.delta += std::sqrt(b.kappa[j]) * sol.alpha[j];
    }
    if (opt.compute_noise) {
        sol.beta.resize(J, J);
        for (Eigen::Index j = 0; j < J; ++j)
            for (Eigen::Index k = 0; k < J; ++k) sol.beta(j, k) = v(4 * j + kA, 1 + k);
    }
    finish(sol);
    return sol;
}

} // namespace

Eigen::Matrix4cd BlockMatrixSet::block(std::size_t j, double omega) const {
    Eigen::Matrix4cd k = m0[j];
    k.diagonal().array() += I * omega;
    k.col(kX) -= (0.5 * gamma) * m_gamma[j];
    return k;
}

Eigen::Matrix4cd free_block(const SystemParams& p, double ck) { return free_block_c(p, ck); }

BlockMatrixSet assemble_blocks(const SystemParams& p, std::span<const ModePolaritons> branches,
                               Treatment cavity, Treatment damping) {
    const bool need = cavity == Treatment::Lindblad || damping == Treatment::Lindblad;
    if (need && branches.size() != static_cast<std::size_t>(p.n_modes))
        throw ConfigError("Lindblad treatment requires polariton data for all " +
                          std::to_string(p.n_modes) + " modes");
    BlockMatrixSet b;
    b.gauge = p.gauge;
    b.cavity = cavity;
    b.damping = damping;
    b.gamma = p.gamma;
    b.ck = mode_wavenumbers(p);
    b.kappa = cavity_loss_rates(p);
    const std::size_t J = p.n_modes;
    b.m0.resize(J);
    b.m_kappa.resize(J);
    b.m_gamma.resize(J);
    for (std::size_t j = 0; j < J; ++j) {
        b.m0[j] = free_block(p, b.ck[j]);
        if (cavity == Treatment::NonLindblad) {
            b.m_kappa[j] << 0.0, 2.0 * I, 0.0, 0.0;
        } else {
            b.m_kappa[j].setZero();
            for (int z = 0; z < 2; ++z) b.m_kappa[j] += branches[j][z].qpxy() * std::conj(branches[j][z].Q);
        }
        if (damping == Treatment::NonLindblad) {
            b.m_gamma[j] << 0.0, 0.0, 0.0, 2.0 * I;
        } else {
            b.m_gamma[j].setZero();
            for (int z = 0; z < 2; ++z) b.m_gamma[j] += branches[j][z].qpxy() * std::conj(branches[j][z].X);
        }
    }
    return b;
}

BlockMatrixSet assemble_blocks(const SystemParams& p, Treatment cavity, Treatment damping, int threads) {
    std::vector<ModePolaritons> modes;
    if (cavity == Treatment::Lindblad || damping == Treatment::Lindblad) modes = diagonalize_all(p, threads);
    return assemble_blocks(p, modes, cavity, damping);
}

ScatteringSolution solve_frequency(const BlockMatrixSet& blocks, double omega, const SolveOptions& opt) {
    if (!(omega > 0)) throw DomainError("solve_frequency: omega must be > 0");
    return opt.method == SolveMethod::Dense ? solve_dense(blocks, omega, opt)
                                            : solve_reduced(blocks, omega, opt);
}

cplx reflection_from_io(const ScatteringSolution& sol, const BlockMatrixSet& blocks) {
    cplx r = 1.0;
    for (std::size_t j = 0; j < sol.alpha.size(); ++j) r += std::sqrt(blocks.kappa[j]) * sol.alpha[j];
    return r;
}

ScatteringSolution solve_polariton_form(const SystemParams& p, std::span<const ModePolaritons> branches,
                                        double omega, bool mode_mixing) {
    if (!(omega > 0)) throw DomainError("solve_polariton_form: omega must be > 0");
    if (branches.size() != static_cast<std::size_t>(p.n_modes))
        throw ConfigError("polariton form requires data for every mode");
    const auto kappa = cavity_loss_rates(p);
    const std::size_t J = branches.size();
    ScatteringSolution sol;
    sol.omega = omega;
    sol.alpha.resize(J);

    std::vector<cplx> cj(J);
    cplx c_sum = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        const auto& m = branches[j];
        Eigen::Matrix2cd D;
        Eigen::Vector2cd q, qc;
        for (int a = 0; a < 2; ++a) {
            q(a) = m[a].Q;
            qc(a) = std::conj(m[a].Q);
            for (int b = 0; b < 2; ++b)
                D(a, b) = (a == b ? I * (omega - m[a].omega) : 0.0) -
                          0.5 * p.gamma * std::conj(m[a].X) * m[b].X;
        }
        const Eigen::Vector2cd pol = D.partialPivLu().solve(qc);
        if (!pol.allFinite()) throw SingularPointError("singular polariton block", omega);
        cj[j] = 0.5 * kappa[j] * (q.array() * pol.array()).sum();
        c_sum += cj[j];
    }
    sol.delta = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        const cplx den = 1.0 - (mode_mixing ? c_sum : cj[j]);
        if (std::abs(den) < 1e-30) throw SingularPointError("port closure singular", omega);
        const cplx u0 = 2.0 * cj[j] / kappa[j];
        sol.alpha[j] = std::sqrt(kappa[j]) * u0 / den;
        if (!mode_mixing) sol.delta += 2.0 * cj[j] / den;
    }
    if (mode_mixing) sol.delta = 2.0 * c_sum / (1.0 - c_sum);
    finish(sol);
    return sol;
}

std::string method_label(Treatment cavity, Treatment damping) {
    return "langevin-" + short_label(cavity) + "-" + short_label(damping);
}

SpectrumTable langevin_spectrum(const BlockMatrixSet& blocks, const SystemParams& p,
                                const std::vector<double>& grid, const SolveOptions& opt, int threads) {
    check_grid(grid);
    SpectrumTable t;
    t.method = method_label(blocks.cavity, blocks.damping);
    t.damping = to_string(blocks.damping);
    t.params = p;
    t.rows.resize(grid.size());
    SolveOptions o = opt;
    o.compute_noise = false;
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        SpectrumRow& row = t.rows[i];
        row.omega = grid[i];
        try {
            const auto sol = solve_frequency(blocks, grid[i], o);
            row.r = sol.r;
            row.absorption = sol.absorption;
        } catch (const SingularPointError&) {
            row.flag = RowFlag::Singular;
        }
    });
    return t;
}

SpectrumTable langevin_spectrum(const SystemParams& p, const std::vector<double>& grid, Treatment cavity,
                                Treatment damping, const SolveOptions& opt, int threads) {
    const auto blocks = assemble_blocks(p, cavity, damping, threads);
    return langevin_spectrum(blocks, p, grid, opt, threads);
}

std::vector<DifferencePoint> normalized_difference_curve(const SystemParams& p, const std::vector<double>& grid,
                                                         const SolveOptions& opt, int threads) {
    const auto lind = langevin_spectrum(p, grid, Treatment::Lindblad, Treatment::NonLindblad, opt, threads);
    const auto nonl = langevin_spectrum(p, grid, Treatment::NonLindblad, Treatment::NonLindblad, opt, threads);
    std::vector<DifferencePoint> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i].omega = grid[i];
        const auto& l = lind.rows[i];
        const auto& n = nonl.rows[i];
        if (l.flag != RowFlag::Ok || n.flag != RowFlag::Ok) {
            out[i].flag = RowFlag::Singular;
            out[i].value = std::nan("");
            continue;
        }
        // R_L - R_NL = A_NL - A_L
        if (n.absorption < 1e-12) {
            out[i].flag = RowFlag::DiffGuard;
            out[i].value = std::nan("");
            continue;
        }
        out[i].value = (n.absorption - l.absorption) / n.absorption;
    }
    return out;
}

cplx infinite_medium_check(const SystemParams& p, double omega) {
    if (!(omega > 0)) throw DomainError("infinite_medium_check: omega must be > 0");
    // the pole of the b_in response is a zero of det K(s), s = c^2 k^2
    auto det = [&](cplx s) {
        Eigen::Matrix4cd k = free_block_c(p, std::sqrt(s));
        k.diagonal().array() += I * omega;
        k(3, kX) -= 0.5 * p.gamma * 2.0 * I;
        return k.determinant();
    };
    cplx s0 = omega * omega;
    cplx s1 = 2.0 * omega * omega + 1.0;
    cplx f0 = det(s0), f1 = det(s1);
    for (int it = 0; it < 50; ++it) {
        if (f1 == f0) break;
        const cplx s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
        s0 = s1;
        f0 = f1;
        s1 = s2;
        f1 = det(s1);
        if (std::abs(s1 - s0) <= 1e-15 * std::abs(s1)) break;
    }
    return s1 / (omega * omega);
}

} // namespace uscav
