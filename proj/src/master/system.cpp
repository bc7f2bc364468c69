// system.cpp — Fock-space operators, Hamiltonian and energy basis for j = 1
#include "uscav/master/system.hpp"
#include "uscav/errors.hpp"
#include "uscav/hopfield.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace uscav {

namespace {

const cplx I(0.0, 1.0);

// splits full-index bands (element (i, i - d)) on the padded layout into
// parity sectors
ParityOperator split_bands(const FockSpace& fs, int parity, const std::map<int, Eigen::VectorXcd>& full) {
    const std::array<int, 2> n = {fs.sector_size(0), fs.sector_size(1)};
    ParityOperator op = ParityOperator::zero(parity, n);
    for (const auto& [d, c] : full) {
        if (((d % 2) + 2) % 2 != parity) throw DomainError("band parity mismatch");
        for (int s = 0; s < 2; ++s) {
            const int t = s ^ parity;
            const int h = (d + t - s) / 2;
            Eigen::VectorXcd half(n[s]);
            for (int p = 0; p < n[s]; ++p) {
                const int i = 2 * p + s;
                half(p) = i < c.size() ? c(i) : 0.0;
            }
            op.block(s).add_band(h, half);
        }
    }
    for (int s = 0; s < 2; ++s) op.block(s).prune();
    return op;
}

} // namespace

std::string to_string(CouplingOperator c) { return c == CouplingOperator::CavityA ? "cavity" : "exciton"; }

double bose(double omega, double temperature) {
    if (!(temperature > 0)) throw DomainError("temperature must be > 0");
    return 1.0 / std::expm1(omega / temperature);
}

MasterSystem::MasterSystem(const SystemParams& p, int cutoff_photon, int cutoff_exciton)
    : params_(p), space_(cutoff_photon, cutoff_exciton), ck_(mode_wavenumber(p, 1)) {
    const int D = space_.padded_dimension();
    const int S = space_.stride();
    Eigen::VectorXcd ca = Eigen::VectorXcd::Zero(D), cb = Eigen::VectorXcd::Zero(D);
    for (int i = 0; i < D; ++i) {
        const int na = i / S, nb = i % S;
        if (nb > space_.cutoff_exciton()) continue;
        if (na < space_.cutoff_photon()) ca(i) = std::sqrt(double(na + 1));
        if (nb < space_.cutoff_exciton()) cb(i) = std::sqrt(double(nb + 1));
    }
    a_ = split_bands(space_, 1, {{-S, ca}});
    b_ = split_bands(space_, 1, {{-1, cb}});

    const ParityOperator ad = a_.adjoint(), bd = b_.adjoint();
    const double wa = p.omega_a;
    ParityOperator h = cplx(ck_) * (ad * a_) + cplx(wa) * (bd * b_);
    if (p.coupling_g != 0.0) {
        if (p.gauge == Gauge::Velocity) {
            const double gc = coupling_velocity(p, ck_);
            const ParityOperator A = a_ + ad;
            const ParityOperator Y = I * (b_ - bd);
            h = h + cplx(gc) * (A * Y) + cplx(gc * gc / wa) * (A * A);
        } else {
            const double gp = coupling_length(p, ck_);
            const ParityOperator X = b_ + bd;
            const ParityOperator B = I * (ad - a_);
            h = h + cplx(gp) * (B * X) + cplx(gp * gp / ck_) * (X * X);
        }
    }
    h_ = h;
}

ParityOperator MasterSystem::bare_lowering(CouplingOperator c) const {
    return c == CouplingOperator::CavityA ? a_ : b_;
}

ParityOperator MasterSystem::field(CouplingOperator c) const {
    const ParityOperator& l = bare_lowering(c);
    return l + l.adjoint();
}

ParityOperator MasterSystem::photon_number() const { return a_.adjoint() * a_; }

ParityOperator MasterSystem::bogoliubov_lowering(CouplingOperator c) const {
    const ModePolaritons m = diagonalize_wavenumber(params_, ck_, 1);
    std::array<cplx, 2> coef;
    for (int z = 0; z < 2; ++z) coef[z] = c == CouplingOperator::CavityA ? m[z].Q : m[z].X;
    const Eigen::Vector4cd v = bare_expansion(m, coef);
    return v(0) * a_ + v(1) * b_ + v(2) * a_.adjoint() + v(3) * b_.adjoint();
}

std::array<int, 2> MasterSystem::sizes(Basis basis) const {
    if (basis == Basis::Fock) return {space_.sector_size(0), space_.sector_size(1)};
    return {static_cast<int>(space_.physical(0).size()), static_cast<int>(space_.physical(1).size())};
}

const EnergyBasis& MasterSystem::energy() const {
    std::call_once(energy_once_, [this] {
        auto e = std::make_unique<EnergyBasis>();
        for (int s = 0; s < 2; ++s) {
            const auto& phys = space_.physical(s);
            const Eigen::MatrixXcd full = h_.block(s).to_dense();
            const int n = static_cast<int>(phys.size());
            Eigen::MatrixXcd hs(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) hs(r, c) = full(phys[r], phys[c]);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs);
            e->energies[s] = es.eigenvalues();
            e->vectors[s] = Eigen::MatrixXcd::Zero(space_.sector_size(s), n);
            for (int r = 0; r < n; ++r) e->vectors[s].row(phys[r]) = es.eigenvectors().row(r);
            e->rank[s].assign(n, 0);
        }
        // global ascending order, ties: even sector first, then index
        std::vector<std::pair<int, int>> all;
        for (int s = 0; s < 2; ++s)
            for (int k = 0; k < e->energies[s].size(); ++k) all.emplace_back(s, k);
        std::stable_sort(all.begin(), all.end(), [&](auto x, auto y) {
            return e->energies[x.first](x.second) < e->energies[y.first](y.second);
        });
        for (std::size_t r = 0; r < all.size(); ++r) e->rank[all[r].first][all[r].second] = static_cast<int>(r);
        e->ground_sector = all.front().first;
        e->ground_energy = e->energies[all.front().first](all.front().second);
        energy_ = std::move(e);
    });
    return *energy_;
}

ParityOperator MasterSystem::to_energy(const ParityOperator& op) const {
    const auto& e = energy();
    const int q = op.parity();
    std::array<SubOperator, 2> blk;
    for (int s = 0; s < 2; ++s)
        blk[s] = SubOperator::from_dense(e.vectors[s].adjoint() * op.block(s).to_dense() * e.vectors[s ^ q]);
    return {q, blk[0], blk[1]};
}

BlockState MasterSystem::to_energy(const BlockState& rho) const {
    const auto& e = energy();
    BlockState out;
    for (int s = 0; s < 2; ++s) out.b[s] = e.vectors[s].adjoint() * rho.b[s] * e.vectors[s];
    return out;
}

BlockState MasterSystem::from_energy(const BlockState& rho) const {
    const auto& e = energy();
    BlockState out;
    for (int s = 0; s < 2; ++s) out.b[s] = e.vectors[s] * rho.b[s] * e.vectors[s].adjoint();
    return out;
}

ParityOperator MasterSystem::eigen_lowering(const ParityOperator& op, int* ties) const {
    const auto& e = energy();
    const int q = op.parity();
    int tie_count = 0;
    std::array<SubOperator, 2> blk;
    for (int s = 0; s < 2; ++s) {
        Eigen::MatrixXcd m = op.block(s).to_dense();
        const int t = s ^ q;
        for (Eigen::Index mu = 0; mu < m.rows(); ++mu)
            for (Eigen::Index nu = 0; nu < m.cols(); ++nu) {
                const double emu = e.energies[s](mu), enu = e.energies[t](nu);
                if (std::abs(enu - emu) <= 1e-9 * std::max(1.0, std::abs(emu)) && std::abs(m(mu, nu)) > 1e-12 &&
                    !(s == t && mu == nu))
                    ++tie_count;
                if (e.rank[t][nu] <= e.rank[s][mu]) m(mu, nu) = 0.0;
            }
        blk[s] = SubOperator::from_dense(std::move(m));
    }
    if (ties) *ties = tie_count / 2; // each degenerate pair is seen from both sides
    return {q, blk[0], blk[1]};
}

ParityOperator MasterSystem::weighted_lowering(const ParityOperator& op,
                                               const std::function<double(double)>& f) const {
    const auto& e = energy();
    const int q = op.parity();
    std::array<SubOperator, 2> blk;
    for (int s = 0; s < 2; ++s) {
        Eigen::MatrixXcd m = op.block(s).to_dense();
        const int t = s ^ q;
        for (Eigen::Index mu = 0; mu < m.rows(); ++mu)
            for (Eigen::Index nu = 0; nu < m.cols(); ++nu) {
                const double w = e.energies[t](nu) - e.energies[s](mu);
                m(mu, nu) = w > 0 ? m(mu, nu) * f(w) : 0.0;
            }
        blk[s] = SubOperator::from_dense(std::move(m));
    }
    return {q, blk[0], blk[1]};
}

BlockState MasterSystem::from_fock(const Eigen::MatrixXcd& rho, Basis basis) const {
    const int d = space_.dimension();
    if (rho.rows() != d || rho.cols() != d) throw DomainError("density matrix has wrong dimension");
    BlockState st = BlockState::zero(sizes(Basis::Fock));
    double leak = 0;
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const int s = space_.sector(i);
            if (space_.sector(k) != s) {
                leak += std::norm(rho(i, k));
                continue;
            }
            st.b[s](space_.half_index(i), space_.half_index(k)) = rho(i, k);
        }
    if (std::sqrt(leak) > 1e-12) throw DomainError("density matrix couples the two parity sectors");
    return basis == Basis::Energy ? to_energy(st) : st;
}

Eigen::MatrixXcd MasterSystem::to_fock(const BlockState& rho, Basis basis) const {
    const BlockState st = basis == Basis::Energy ? from_energy(rho) : rho;
    const int d = space_.dimension();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const int s = space_.sector(i);
            if (space_.sector(k) == s) out(i, k) = st.b[s](space_.half_index(i), space_.half_index(k));
        }
    return out;
}

Eigen::MatrixXcd MasterSystem::dense(const ParityOperator& op) const {
    const int d = space_.dimension();
    const std::array<Eigen::MatrixXcd, 2> blk = {op.block(0).to_dense(), op.block(1).to_dense()};
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const int s = space_.sector(i);
            if (space_.sector(k) == (s ^ op.parity()))
                out(i, k) = blk[s](space_.half_index(i), space_.half_index(k));
        }
    return out;
}

Eigen::VectorXcd MasterSystem::ground_state() const {
    const auto& e = energy();
    const int s = e.ground_sector;
    Eigen::Index k = 0;
    e.energies[s].minCoeff(&k);
    const Eigen::VectorXcd half = e.vectors[s].col(k);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(space_.dimension());
    for (int i = 0; i < space_.dimension(); ++i)
        if (space_.sector(i) == s) psi(i) = half(space_.half_index(i));
    return psi;
}

Eigen::MatrixXcd MasterSystem::gibbs_state(double temperature) const {
    if (!(temperature > 0)) throw DomainError("gibbs_state: temperature must be > 0");
    const auto& e = energy();
    BlockState st;
    double z = 0;
    for (int s = 0; s < 2; ++s) {
        const Eigen::VectorXd w = (-(e.energies[s].array() - e.ground_energy) / temperature).exp();
        z += w.sum();
        st.b[s] = e.vectors[s] * w.cast<cplx>().asDiagonal() * e.vectors[s].adjoint();
    }
    for (auto& m : st.b) m /= z;
    return to_fock(st);
}

double MasterSystem::min_eigenvalue(const BlockState& rho, Basis basis) const {
    double lo = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 2; ++s) {
        Eigen::MatrixXcd m;
        if (basis == Basis::Fock && space_.padded()) {
            const auto& phys = space_.physical(s);
            const int n = static_cast<int>(phys.size());
            m.resize(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) m(r, c) = rho.b[s](phys[r], phys[c]);
        } else {
            m = rho.b[s];
        }
        if (m.size() == 0) continue;
        const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
}

Eigen::MatrixXcd build_hamiltonian(const SystemParams& p, const FockSpace& space) {
    MasterSystem sys(p, space.cutoff_photon(), space.cutoff_exciton());
    return sys.dense(sys.hamiltonian());
}

LoweringResult lowering_component(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& ham) {
    if (op.rows() != ham.rows() || op.cols() != ham.cols() || ham.rows() != ham.cols())
        throw DomainError("lowering_component: shape mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ham);
    const Eigen::VectorXd& e = es.eigenvalues();
    const Eigen::MatrixXcd& u = es.eigenvectors();
    Eigen::MatrixXcd m = u.adjoint() * op * u;
    LoweringResult out;
    for (Eigen::Index mu = 0; mu < m.rows(); ++mu)
        for (Eigen::Index nu = 0; nu < m.cols(); ++nu) {
            if (nu > mu && std::abs(e(nu) - e(mu)) <= 1e-9 * std::max(1.0, std::abs(e(mu))) &&
                std::abs(m(mu, nu)) > 1e-12)
                ++out.ties;
            if (nu <= mu) m(mu, nu) = 0.0;
        }
    out.matrix = u * m * u.adjoint();
    return out;
}

double fidelity_pure(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi) {
    return psi.dot(rho * psi).real() / psi.squaredNorm();
}

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sq = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    const Eigen::MatrixXcd inner = sq * sigma * sq;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
    const double tr = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

double min_eigenvalue(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace uscav
