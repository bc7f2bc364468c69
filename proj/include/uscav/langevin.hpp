// langevin.hpp — frequency-domain quantum Langevin solver for the multimode cavity
//
// Per mode the unknowns are ordered (A_j, B_j, X_j, Y_j). Modes couple only
// through the shared port, i.e. through the scalar S = sum_j sqrt(kappa_j)/2 A_j.
#pragma once

#include "uscav/hopfield.hpp"
#include "uscav/mbc.hpp"
#include "uscav/model.hpp"
#include "uscav/spectrum.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace uscav {

struct BlockMatrixSet {
    Gauge gauge = Gauge::Velocity;
    Treatment cavity = Treatment::NonLindblad;
    Treatment damping = Treatment::NonLindblad;
    double gamma = 0;
    std::vector<double> ck;
    std::vector<double> kappa;
    std::vector<Eigen::Matrix4cd> m0;
    std::vector<Eigen::Vector4cd> m_kappa;
    std::vector<Eigen::Vector4cd> m_gamma;

    std::size_t modes() const { return m0.size(); }
    // K_j(omega) = M0_j + i omega - (gamma/2) M_gamma,j e_X^T
    Eigen::Matrix4cd block(std::size_t j, double omega) const;
};

Eigen::Matrix4cd free_block(const SystemParams& p, double ck);

// `branches` may be empty when both treatments are NonLindblad
BlockMatrixSet assemble_blocks(const SystemParams& p, std::span<const ModePolaritons> branches,
                               Treatment cavity, Treatment damping);
// diagonalizes the modes itself when needed
BlockMatrixSet assemble_blocks(const SystemParams& p, Treatment cavity, Treatment damping,
                               int threads = 0);

enum class SolveMethod { Dense, RankOneReduced };

struct SolveOptions {
    SolveMethod method = SolveMethod::RankOneReduced;
    bool mode_mixing = true;
    bool compute_noise = false; // fill beta
};

struct ScatteringSolution {
    double omega = 0;
    std::vector<cplx> alpha;
    Eigen::MatrixXcd beta; // J x J, empty unless requested
    cplx r;
    cplx delta;            // r - 1
    double absorption = 0; // 1 - |r|^2 = -2 Re(delta) - |delta|^2
};

// throws SingularPointError
ScatteringSolution solve_frequency(const BlockMatrixSet& blocks, double omega,
                                   const SolveOptions& opt = {});

// 1 + sum_j sqrt(kappa_j) alpha_j
cplx reflection_from_io(const ScatteringSolution& sol, const BlockMatrixSet& blocks);

// all-Lindblad path written directly for the polariton amplitudes, 2x2 per mode
ScatteringSolution solve_polariton_form(const SystemParams& p, std::span<const ModePolaritons> branches,
                                        double omega, bool mode_mixing = true);

std::string method_label(Treatment cavity, Treatment damping);

SpectrumTable langevin_spectrum(const BlockMatrixSet& blocks, const SystemParams& p,
                                const std::vector<double>& grid, const SolveOptions& opt = {},
                                int threads = 0);
SpectrumTable langevin_spectrum(const SystemParams& p, const std::vector<double>& grid,
                                Treatment cavity, Treatment damping, const SolveOptions& opt = {},
                                int threads = 0);

struct DifferencePoint {
    double omega = 0;
    double value = 0; // (R_L - R_NL) / (1 - R_NL), cavity treatment varied
    RowFlag flag = RowFlag::Ok;
};

std::vector<DifferencePoint> normalized_difference_curve(const SystemParams& p,
                                                         const std::vector<double>& grid,
                                                         const SolveOptions& opt = {},
                                                         int threads = 0);

// bulk (no port) system: finds c^2 k^2 where the response to b_in has its
// pole at this omega and returns eps = c^2 k^2 / omega^2
cplx infinite_medium_check(const SystemParams& p, double omega);

} // namespace uscav
