// system.hpp — single-mode (j = 1) photon + exciton system on a truncated Fock space
#pragma once

#include "uscav/master/fock.hpp"
#include "uscav/master/operator.hpp"
#include "uscav/model.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <mutex>

namespace uscav {

enum class Basis { Fock, Energy };
enum class CouplingOperator { CavityA, ExcitonX };

std::string to_string(CouplingOperator c);

// eigen decomposition of H per parity sector
struct EnergyBasis {
    std::array<Eigen::VectorXd, 2> energies;  // ascending within a sector
    std::array<Eigen::MatrixXcd, 2> vectors;  // half-index rows x physical states
    std::array<std::vector<int>, 2> rank;     // position in the global ascending order
    double ground_energy = 0;
    int ground_sector = 0;
};

class MasterSystem {
public:
    MasterSystem(const SystemParams& p, int cutoff_photon, int cutoff_exciton);

    const SystemParams& params() const { return params_; }
    const FockSpace& space() const { return space_; }
    double ck() const { return ck_; }

    // Fock-basis operators, banded
    const ParityOperator& hamiltonian() const { return h_; }
    const ParityOperator& a() const { return a_; }
    const ParityOperator& b() const { return b_; }
    ParityOperator field(CouplingOperator c) const;        // a + a^dag or b + b^dag
    ParityOperator bare_lowering(CouplingOperator c) const; // a or b
    ParityOperator photon_number() const;
    // sum_zeta Q p_zeta (cavity) or sum_zeta X p_zeta (exciton) from the Hopfield solution
    ParityOperator bogoliubov_lowering(CouplingOperator c) const;

    std::array<int, 2> sizes(Basis basis) const;

    const EnergyBasis& energy() const;
    // U^dag O U, dense per sector
    ParityOperator to_energy(const ParityOperator& op) const;
    BlockState to_energy(const BlockState& rho) const;
    BlockState from_energy(const BlockState& rho) const;

    // energy-basis lowering component; counts degenerate pairs that had to be
    // ordered by index
    ParityOperator eigen_lowering(const ParityOperator& op_energy, int* ties = nullptr) const;
    // sum over transitions with omega_{nu mu} > 0 of f(omega_{nu mu}) A_{mu nu}
    ParityOperator weighted_lowering(const ParityOperator& op_energy,
                                     const std::function<double(double)>& f) const;

    // conversions with physical row-major Fock matrices
    BlockState from_fock(const Eigen::MatrixXcd& rho, Basis basis = Basis::Fock) const;
    Eigen::MatrixXcd to_fock(const BlockState& rho, Basis basis = Basis::Fock) const;
    Eigen::MatrixXcd dense(const ParityOperator& op_fock) const;

    Eigen::VectorXcd ground_state() const;
    Eigen::MatrixXcd gibbs_state(double temperature) const;

    // smallest eigenvalue over the physical states
    double min_eigenvalue(const BlockState& rho, Basis basis) const;

private:
    SystemParams params_;
    FockSpace space_;
    double ck_;
    ParityOperator h_, a_, b_;
    mutable std::once_flag energy_once_;
    mutable std::unique_ptr<EnergyBasis> energy_;
};

// dense Hamiltonian in the physical Fock ordering
Eigen::MatrixXcd build_hamiltonian(const SystemParams& p, const FockSpace& space);

struct LoweringResult {
    Eigen::MatrixXcd matrix;
    int ties = 0;
};

// A^+ = sum_{mu, nu > mu} |mu><mu|A|nu><nu| for Hermitian ham, ascending eigenvalues
LoweringResult lowering_component(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& ham);

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
double fidelity_pure(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi);
double min_eigenvalue(const Eigen::MatrixXcd& rho);

// Bose occupation 1/(exp(omega/T) - 1)
double bose(double omega, double temperature);

} // namespace uscav
