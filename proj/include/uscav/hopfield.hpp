// hopfield.hpp — Bogoliubov diagonalization of the single-mode Hopfield model
//
// Polariton operator p = w a + x b + y a^dag + z b^dag with [p, H] = omega p.
// Derived combinations: Q = (w-y)*, Pi = i(w+y)*, X = (x-z)*, Y = i(x+z)*.
#pragma once

#include "uscav/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace uscav {

enum class Branch { Lower = 0, Upper = 1 };

std::string to_string(Branch b);

struct HopfieldBranch {
    int j = 0;
    Branch zeta = Branch::Lower;
    double omega = 0;
    cplx w, x, y, z;
    cplx Q, Pi, X, Y;

    double symplectic_norm() const;
    // (Q, Pi, X, Y) as a vector, the ordering used by the Langevin blocks
    Eigen::Vector4cd qpxy() const;
};

struct ModePolaritons {
    HopfieldBranch lower;
    HopfieldBranch upper;
    const HopfieldBranch& operator[](int zeta) const { return zeta == 0 ? lower : upper; }
};

// [Phi_i, H] = sum_k C_ik Phi_k with Phi = (a, b, a^dag, b^dag)
Eigen::Matrix4cd commutator_matrix(const SystemParams& p, double ck);

// diagonalization at an arbitrary wavenumber c k > 0; `j` only labels the result
ModePolaritons diagonalize_wavenumber(const SystemParams& p, double ck, int j = 0);
// 1 <= j <= n_modes
ModePolaritons diagonalize_mode(const SystemParams& p, int j);
std::vector<ModePolaritons> diagonalize_all(const SystemParams& p, int threads = 0);

// closed-form frequencies, roots of w^4 - w^2 (c^2k^2 + wa^2 (1+4G^2)) + c^2k^2 wa^2 = 0
std::array<double, 2> polariton_frequencies(const SystemParams& p, double ck);

struct LoweringCoefficients {
    int j = 0;
    std::array<cplx, 2> Q; // A^+_j = sum_zeta Q_zeta p_zeta
    std::array<cplx, 2> X; // X^+_j = sum_zeta X_zeta p_zeta
};

std::vector<LoweringCoefficients> lowering_coefficients(const std::vector<ModePolaritons>& modes);
LoweringCoefficients lowering_coefficients(const ModePolaritons& mode);

// coefficients of sum_zeta c_zeta p_zeta on (a, b, a^dag, b^dag)
Eigen::Vector4cd bare_expansion(const ModePolaritons& mode, const std::array<cplx, 2>& c);

} // namespace uscav
