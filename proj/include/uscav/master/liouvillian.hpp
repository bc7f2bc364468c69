// liouvillian.hpp — generators for the cavity/exciton master equations
//
// Every dissipator is written in the unified form
//   D_{C,W}[rho] = 1/2 ([C, rho W^dag] + [W rho, C^dag]),
// so the whole generator is L[rho] = X + X^dag with
//   X = K rho + 1/2 sum C rho W^dag,   K = -i H - 1/2 sum C^dag W.
#pragma once

#include "uscav/master/operator.hpp"
#include "uscav/master/system.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace uscav {

enum class DissipatorVariant {
    PhotonLindblad,     // jump operators a (or b): bare lowering
    EigenLindblad,      // jump operator A^+: lowering component of the coupling operator
    NonLindblad,        // C = A, W = kappa (n+1) A^+ and kappa n A^-
    EigenLindbladOmega, // A^+ with rates and occupations per transition frequency
    PostTraceRWA,       // rate equations in the energy basis
    NonLindbladOmega    // C = A with transition-resolved W
};

std::string to_string(DissipatorVariant v);
DissipatorVariant variant_from_string(const std::string& s);
bool is_lindblad(DissipatorVariant v);
bool needs_eigenbasis(DissipatorVariant v);

struct DissipatorSpec {
    DissipatorVariant variant = DissipatorVariant::NonLindblad;
    CouplingOperator coupling = CouplingOperator::CavityA;
    double rate = 0;                           // flat rate (kappa_1 or gamma)
    std::function<double(double)> rate_function; // omega -> rate, Omega variants
    double occupation = 0;                     // flat n
    std::optional<double> temperature;         // Bose n(omega) for the Omega variants

    double rate_at(double omega) const;
    double occupation_at(double omega) const;
};

enum class LoweringSource {
    Bogoliubov, // sum_zeta Q p_zeta, exact in the untruncated space, banded
    Eigenbasis  // lowering component in the eigenbasis of the truncated H
};

struct LiouvillianOptions {
    LoweringSource lowering = LoweringSource::Bogoliubov;
    std::optional<Basis> basis; // default: Energy iff some term needs the eigenbasis
};

class Liouvillian {
public:
    struct Workspace {
        BlockState x;
        std::array<Eigen::MatrixXcd, 2> tmp;
        Eigen::VectorXcd col, col2;
    };

    Basis basis() const { return basis_; }
    const MasterSystem& system() const { return *sys_; }
    std::shared_ptr<const MasterSystem> system_ptr() const { return sys_; }
    std::array<int, 2> sizes() const { return sys_->sizes(basis_); }
    const std::vector<std::string>& warnings() const { return warnings_; }

    void apply(const BlockState& rho, BlockState& out, Workspace& ws) const;
    BlockState apply(const BlockState& rho) const;
    // physical Fock matrices in and out
    Eigen::MatrixXcd apply_fock(const Eigen::MatrixXcd& rho) const;

    // matrix of L on parity-diagonal states over physical states, acting on
    // (vec(rho_even), vec(rho_odd)) column-major
    Eigen::MatrixXcd superoperator() const;
    std::array<int, 2> superoperator_sizes() const;

    BlockState to_state(const Eigen::MatrixXcd& rho_fock) const { return sys_->from_fock(rho_fock, basis_); }
    Eigen::MatrixXcd to_fock(const BlockState& rho) const { return sys_->to_fock(rho, basis_); }
    const ParityOperator& photon_number() const { return n_; }
    double min_eigenvalue(const BlockState& rho) const { return sys_->min_eigenvalue(rho, basis_); }
    // generator norm ||L[rho]|| helper
    double residual(const Eigen::MatrixXcd& rho_fock) const;

    const ParityOperator& k() const { return k_; }
    std::array<Eigen::VectorXcd, 2> k_diagonal() const;

private:
    friend Liouvillian build_liouvillian(std::shared_ptr<const MasterSystem>, const std::vector<DissipatorSpec>&,
                                         const LiouvillianOptions&);
    struct Pair {
        ParityOperator c, wd; // contributes 1/2 C rho W^dag
    };
    struct Gain {
        // population transfer between sectors: pop[dst] += rates * pop[src]
        int dst, src;
        Eigen::MatrixXd rates;
    };

    std::shared_ptr<const MasterSystem> sys_;
    Basis basis_ = Basis::Fock;
    ParityOperator k_;
    std::vector<Pair> pairs_;
    std::vector<Gain> gains_;
    ParityOperator n_;
    std::vector<std::string> warnings_;
    bool banded_ = false;

    void apply_banded(const BlockState& rho, Workspace& ws) const;
    void apply_dense(const BlockState& rho, Workspace& ws) const;
};

Liouvillian build_liouvillian(std::shared_ptr<const MasterSystem> sys, const std::vector<DissipatorSpec>& specs,
                              const LiouvillianOptions& opt = {});

// cavity (kappa_1, occupation n_cavity) and exciton (gamma, n_exciton) channels of one variant
std::vector<DissipatorSpec> standard_channels(DissipatorVariant v, double kappa, double gamma,
                                              double n_exciton, double n_cavity = 0.0);
// cavity and exciton channels of an Omega variant with flat rates and Bose occupation at T
std::vector<DissipatorSpec> thermal_channels(DissipatorVariant v, double kappa, double gamma, double temperature);

} // namespace uscav
