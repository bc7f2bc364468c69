// liouvillian.cpp — assembly and action of the master-equation generator
#include "uscav/master/liouvillian.hpp"
#include "uscav/errors.hpp"

#include <algorithm>
#include <cmath>

namespace uscav {

namespace {

const cplx I(0.0, 1.0);

ParityOperator diagonal_operator(const std::array<Eigen::VectorXd, 2>& d) {
    std::array<SubOperator, 2> blk;
    for (int s = 0; s < 2; ++s) {
        const int n = static_cast<int>(d[s].size());
        blk[s] = SubOperator(n, n);
        blk[s].add_band(0, d[s].cast<cplx>());
    }
    return {0, blk[0], blk[1]};
}

bool zero(double v) { return v == 0.0; }

} // namespace

std::string to_string(DissipatorVariant v) {
    switch (v) {
    case DissipatorVariant::PhotonLindblad: return "photon-lindblad";
    case DissipatorVariant::EigenLindblad: return "eigen-lindblad";
    case DissipatorVariant::NonLindblad: return "non-lindblad";
    case DissipatorVariant::EigenLindbladOmega: return "eigen-lindblad-omega";
    case DissipatorVariant::PostTraceRWA: return "post-trace-rwa";
    case DissipatorVariant::NonLindbladOmega: return "non-lindblad-omega";
    }
    return "?";
}

DissipatorVariant variant_from_string(const std::string& s) {
    for (auto v : {DissipatorVariant::PhotonLindblad, DissipatorVariant::EigenLindblad, DissipatorVariant::NonLindblad,
                   DissipatorVariant::EigenLindbladOmega, DissipatorVariant::PostTraceRWA,
                   DissipatorVariant::NonLindbladOmega})
        if (to_string(v) == s) return v;
    throw ConfigError("unknown dissipator variant '" + s + "'", 0, "variant");
}

bool is_lindblad(DissipatorVariant v) {
    return v == DissipatorVariant::PhotonLindblad || v == DissipatorVariant::EigenLindblad ||
           v == DissipatorVariant::PostTraceRWA;
}

bool needs_eigenbasis(DissipatorVariant v) {
    return v == DissipatorVariant::EigenLindbladOmega || v == DissipatorVariant::PostTraceRWA ||
           v == DissipatorVariant::NonLindbladOmega;
}

double DissipatorSpec::rate_at(double omega) const { return rate_function ? rate_function(omega) : rate; }

double DissipatorSpec::occupation_at(double omega) const {
    return temperature ? bose(omega, *temperature) : occupation;
}

Liouvillian build_liouvillian(std::shared_ptr<const MasterSystem> sys, const std::vector<DissipatorSpec>& specs,
                              const LiouvillianOptions& opt) {
    if (!sys) throw DomainError("build_liouvillian: no system");
    bool energy = false;
    for (const auto& sp : specs) {
        if (sp.rate < 0 || sp.occupation < 0) throw ConfigError("rates and occupations must be >= 0");
        if (sp.temperature && !(*sp.temperature > 0)) throw DomainError("temperature must be > 0");
        if (needs_eigenbasis(sp.variant)) energy = true;
        if (opt.lowering == LoweringSource::Eigenbasis &&
            (sp.variant == DissipatorVariant::EigenLindblad || sp.variant == DissipatorVariant::NonLindblad))
            energy = true;
    }
    if (opt.basis) {
        if (*opt.basis == Basis::Fock && energy)
            throw ConfigError("these dissipators need the energy basis");
        energy = *opt.basis == Basis::Energy;
    }

    Liouvillian L;
    L.sys_ = sys;
    L.basis_ = energy ? Basis::Energy : Basis::Fock;
    const MasterSystem& S = *sys;
    auto in_basis = [&](const ParityOperator& op) { return energy ? S.to_energy(op) : op; };

    ParityOperator h = energy ? diagonal_operator(S.energy().energies) : S.hamiltonian();
    L.n_ = in_basis(S.photon_number());

    ParityOperator r_dag = ParityOperator::zero(0, L.sizes()); // sum C^dag W
    std::array<Eigen::VectorXd, 2> out_rate = {Eigen::VectorXd::Zero(L.sizes()[0]),
                                               Eigen::VectorXd::Zero(L.sizes()[1])};
    int ties = 0, degenerate = 0;

    auto add_pair = [&](const ParityOperator& c, const ParityOperator& wd) {
        L.pairs_.push_back({c, wd});
        r_dag = r_dag + c.adjoint() * wd.adjoint();
    };
    auto lowering = [&](CouplingOperator c) {
        if (opt.lowering == LoweringSource::Bogoliubov) return in_basis(S.bogoliubov_lowering(c));
        int t = 0;
        ParityOperator lp = S.eigen_lowering(S.to_energy(S.field(c)), &t);
        ties += t;
        return lp;
    };

    for (const auto& sp : specs) {
        const double k = sp.rate, n = sp.occupation;
        switch (sp.variant) {
        case DissipatorVariant::PhotonLindblad:
        case DissipatorVariant::EigenLindblad: {
            const ParityOperator lp = sp.variant == DissipatorVariant::PhotonLindblad
                                          ? in_basis(S.bare_lowering(sp.coupling))
                                          : lowering(sp.coupling);
            const ParityOperator lm = lp.adjoint();
            if (!zero(k * (n + 1))) add_pair(lp, cplx(k * (n + 1)) * lm);
            if (!zero(k * n)) add_pair(lm, cplx(k * n) * lp);
            break;
        }
        case DissipatorVariant::NonLindblad: {
            const ParityOperator a = in_basis(S.field(sp.coupling));
            const ParityOperator lp = lowering(sp.coupling);
            if (!zero(k)) add_pair(a, cplx(k * (n + 1)) * lp.adjoint() + cplx(k * n) * lp);
            break;
        }
        case DissipatorVariant::EigenLindbladOmega:
        case DissipatorVariant::NonLindbladOmega: {
            const ParityOperator a = S.to_energy(S.field(sp.coupling));
            const ParityOperator up = S.weighted_lowering(a, [&](double w) {
                return sp.rate_at(w) * (sp.occupation_at(w) + 1.0);
            });
            const ParityOperator un = S.weighted_lowering(a, [&](double w) {
                return sp.rate_at(w) * sp.occupation_at(w);
            });
            if (sp.variant == DissipatorVariant::EigenLindbladOmega) {
                int t = 0;
                const ParityOperator lp = S.eigen_lowering(a, &t);
                ties += t;
                add_pair(lp, up.adjoint());
                add_pair(lp.adjoint(), un);
            } else {
                add_pair(a, up.adjoint() + un);
            }
            break;
        }
        case DissipatorVariant::PostTraceRWA: {
            const auto& e = S.energy();
            const ParityOperator a = S.to_energy(S.field(sp.coupling));
            for (int s = 0; s < 2; ++s) {
                const int t = s ^ a.parity();
                const Eigen::MatrixXcd m = a.block(s).to_dense();
                Eigen::MatrixXd down = Eigen::MatrixXd::Zero(m.rows(), m.cols());
                Eigen::MatrixXd up = Eigen::MatrixXd::Zero(m.cols(), m.rows());
                for (Eigen::Index mu = 0; mu < m.rows(); ++mu)
                    for (Eigen::Index nu = 0; nu < m.cols(); ++nu) {
                        const double w = e.energies[t](nu) - e.energies[s](mu);
                        const double a2 = std::norm(m(mu, nu));
                        if (a2 == 0.0) continue;
                        if (w <= 1e-12 * std::max(1.0, std::abs(e.energies[s](mu)))) {
                            if (w > -1e-12 && !(s == t && mu == nu)) ++degenerate;
                            continue;
                        }
                        const double r = sp.rate_at(w), occ = sp.occupation_at(w);
                        down(mu, nu) = r * (occ + 1) * a2;
                        up(nu, mu) = r * occ * a2;
                        out_rate[t](nu) += down(mu, nu);
                        out_rate[s](mu) += up(nu, mu);
                    }
                L.gains_.push_back({s, t, down});
                L.gains_.push_back({t, s, up});
            }
            break;
        }
        }
    }
    if (ties > 0)
        L.warnings_.push_back(std::to_string(ties) + " degenerate eigenvalue pairs ordered by index in A^+");
    if (degenerate > 0)
        L.warnings_.push_back(std::to_string(degenerate / 2) + " degenerate transitions skipped in the rate equations");

    L.k_ = cplx(0, -1) * h - cplx(0.5) * r_dag;
    if (out_rate[0].size() + out_rate[1].size() > 0 && (out_rate[0].any() || out_rate[1].any())) {
        std::array<Eigen::VectorXd, 2> half = {-0.5 * out_rate[0], -0.5 * out_rate[1]};
        L.k_ = L.k_ + diagonal_operator(half);
    }
    for (int s = 0; s < 2; ++s) L.k_.block(s).prune();
    L.banded_ = !L.k_.is_dense();
    for (const auto& p : L.pairs_) L.banded_ = L.banded_ && !p.c.is_dense() && !p.wd.is_dense();
    return L;
}

void Liouvillian::apply(const BlockState& rho, BlockState& out, Workspace& ws) const {
    if (banded_) {
        apply_banded(rho, ws);
    } else {
        apply_dense(rho, ws);
    }
    for (int s = 0; s < 2; ++s) out.b[s] = ws.x.b[s] + ws.x.b[s].adjoint();
    for (const auto& g : gains_) {
        const Eigen::VectorXd pop = rho.b[g.src].diagonal().real();
        out.b[g.dst].diagonal() += (g.rates * pop).cast<cplx>();
    }
}

void Liouvillian::apply_dense(const BlockState& rho, Workspace& ws) const {
    const auto n = sizes();
    for (int s = 0; s < 2; ++s) ws.x.b[s].setZero(n[s], n[s]);
    for (int s = 0; s < 2; ++s) k_.block(s).apply_left(rho.b[s], 1.0, ws.x.b[s]);
    for (const auto& p : pairs_) {
        const int q = p.wd.parity();
        // tmp[s] = rho[s] Wd, rows in sector s, columns in sector s ^ q
        for (int s = 0; s < 2; ++s) {
            ws.tmp[s].setZero(n[s], n[s ^ q]);
            p.wd.block(s).apply_right(rho.b[s], 1.0, ws.tmp[s]);
        }
        for (int s = 0; s < 2; ++s) p.c.block(s).apply_left(ws.tmp[s ^ q], 0.5, ws.x.b[s]);
    }
}

// column at a time, so every term of a column is accumulated while it stays in cache
void Liouvillian::apply_banded(const BlockState& rho, Workspace& ws) const {
    const auto n = sizes();
    for (int s = 0; s < 2; ++s) {
        ws.x.b[s].resize(n[s], n[s]);
        const SubOperator& k = k_.block(s);
        for (int j = 0; j < n[s]; ++j) {
            ws.col.setZero(n[s]);
            k.apply_vector(rho.b[s].col(j), 1.0, ws.col);
            for (const auto& p : pairs_) {
                const int t = s ^ p.wd.parity();
                ws.col2.setZero(n[t]);
                p.wd.block(t).right_column(rho.b[t], j, 1.0, ws.col2);
                p.c.block(s).apply_vector(ws.col2, 0.5, ws.col);
            }
            ws.x.b[s].col(j) = ws.col;
        }
    }
}

BlockState Liouvillian::apply(const BlockState& rho) const {
    Workspace ws;
    BlockState out;
    apply(rho, out, ws);
    return out;
}

Eigen::MatrixXcd Liouvillian::apply_fock(const Eigen::MatrixXcd& rho) const {
    return to_fock(apply(to_state(rho)));
}

std::array<Eigen::VectorXcd, 2> Liouvillian::k_diagonal() const {
    std::array<Eigen::VectorXcd, 2> d;
    for (int s = 0; s < 2; ++s) {
        const SubOperator& k = k_.block(s);
        d[s] = Eigen::VectorXcd::Zero(k.rows());
        if (k.is_dense()) {
            d[s] = k.dense().diagonal();
            continue;
        }
        for (const auto& b : k.bands())
            if (b.offset == 0) d[s] = b.coeff;
    }
    return d;
}

double Liouvillian::residual(const Eigen::MatrixXcd& rho_fock) const { return apply_fock(rho_fock).norm(); }

std::array<int, 2> Liouvillian::superoperator_sizes() const {
    return {static_cast<int>(sys_->space().physical(0).size()), static_cast<int>(sys_->space().physical(1).size())};
}

Eigen::MatrixXcd Liouvillian::superoperator() const {
    const auto n = superoperator_sizes();
    const std::array<Eigen::Index, 2> off = {0, Eigen::Index(n[0]) * n[0]};
    const Eigen::Index total = Eigen::Index(n[0]) * n[0] + Eigen::Index(n[1]) * n[1];
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(total, total);

    // dense sub-block restricted to physical states
    auto restrict = [&](const SubOperator& op, int row_sector, int col_sector) {
        Eigen::MatrixXcd d = op.to_dense();
        if (basis_ == Basis::Energy || !sys_->space().padded()) return d;
        const auto& pr = sys_->space().physical(row_sector);
        const auto& pc = sys_->space().physical(col_sector);
        Eigen::MatrixXcd out(pr.size(), pc.size());
        for (std::size_t r = 0; r < pr.size(); ++r)
            for (std::size_t c = 0; c < pc.size(); ++c) out(r, c) = d(pr[r], pc[c]);
        return out;
    };
    // out[s] += A[s] rho[t] B[t] with t = s ^ q
    auto add_term = [&](const ParityOperator& A, const ParityOperator& B, cplx coef) {
        const int q = A.parity();
        for (int s = 0; s < 2; ++s) {
            const int t = s ^ q;
            const Eigen::MatrixXcd a = coef * restrict(A.block(s), s, t);
            const Eigen::MatrixXcd b = restrict(B.block(t), t, s);
            // vec(a X b) = (b^T kron a) vec(X)
            const Eigen::Index ns = n[s], nt = n[t];
            for (Eigen::Index j = 0; j < nt; ++j)
                for (Eigen::Index l = 0; l < ns; ++l) {
                    const cplx bjl = b(j, l);
                    if (bjl == 0.0) continue;
                    M.block(off[s] + l * ns, off[t] + j * nt, ns, nt) += bjl * a;
                }
        }
    };
    const ParityOperator id = ParityOperator::identity(sizes());
    add_term(k_, id, 1.0);
    add_term(id, k_.adjoint(), 1.0);
    for (const auto& p : pairs_) {
        add_term(p.c, p.wd, 0.5);
        add_term(p.wd.adjoint(), p.c.adjoint(), 0.5);
    }
    for (const auto& g : gains_) {
        const int ns = n[g.dst], nt = n[g.src];
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nt; ++j)
                if (g.rates(i, j) != 0.0) M(off[g.dst] + i * ns + i, off[g.src] + j * nt + j) += g.rates(i, j);
    }
    return M;
}

std::vector<DissipatorSpec> standard_channels(DissipatorVariant v, double kappa, double gamma, double n_exciton,
                                              double n_cavity) {
    DissipatorSpec cav{v, CouplingOperator::CavityA, kappa, {}, n_cavity, std::nullopt};
    DissipatorSpec exc{v, CouplingOperator::ExcitonX, gamma, {}, n_exciton, std::nullopt};
    return {cav, exc};
}

std::vector<DissipatorSpec> thermal_channels(DissipatorVariant v, double kappa, double gamma, double temperature) {
    DissipatorSpec cav{v, CouplingOperator::CavityA, kappa, {}, 0.0, temperature};
    DissipatorSpec exc{v, CouplingOperator::ExcitonX, gamma, {}, 0.0, temperature};
    return {cav, exc};
}

} // namespace uscav
