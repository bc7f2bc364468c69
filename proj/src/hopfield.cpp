// hopfield.cpp — 4x4 eigenoperator problem for one photon mode and one exciton
#include "uscav/hopfield.hpp"
#include "uscav/errors.hpp"
#include "uscav/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace uscav {

namespace {

const cplx I(0.0, 1.0);

void fill_derived(HopfieldBranch& b) {
    b.Q = std::conj(b.w - b.y);
    b.Pi = I * std::conj(b.w + b.y);
    b.X = std::conj(b.x - b.z);
    b.Y = I * std::conj(b.x + b.z);
}

// decoupled oscillators; used when G = 0, where the numerical eigenvectors of
// a degenerate pair are not unique
ModePolaritons decoupled(const SystemParams& p, double ck, int j) {
    HopfieldBranch photon{}, exciton{};
    photon.w = 1.0;
    photon.omega = ck;
    exciton.x = 1.0;
    exciton.omega = p.omega_a;
    fill_derived(photon);
    fill_derived(exciton);
    ModePolaritons out;
    if (ck <= p.omega_a) {
        out.lower = photon;
        out.upper = exciton;
    } else {
        out.lower = exciton;
        out.upper = photon;
    }
    out.lower.j = out.upper.j = j;
    out.lower.zeta = Branch::Lower;
    out.upper.zeta = Branch::Upper;
    return out;
}

} // namespace

std::string to_string(Branch b) { return b == Branch::Lower ? "L" : "U"; }

double HopfieldBranch::symplectic_norm() const {
    return std::norm(w) + std::norm(x) - std::norm(y) - std::norm(z);
}

Eigen::Vector4cd HopfieldBranch::qpxy() const { return {Q, Pi, X, Y}; }

Eigen::Matrix4cd commutator_matrix(const SystemParams& p, double ck) {
    const double wa = p.omega_a;
    Eigen::Matrix4cd C;
    if (p.gauge == Gauge::Velocity) {
        const double gc = coupling_velocity(p, ck);
        const double lam = gc * gc / wa;
        C << ck + 2 * lam, I * gc, 2 * lam, -I * gc,
             -I * gc, wa, -I * gc, 0.0,
             -2 * lam, -I * gc, -ck - 2 * lam, I * gc,
             -I * gc, 0.0, -I * gc, -wa;
    } else {
        const double gp = coupling_length(p, ck);
        const double mu = gp * gp / ck;
        C << ck, I * gp, 0.0, I * gp,
             -I * gp, wa + 2 * mu, I * gp, 2 * mu,
             0.0, I * gp, -ck, I * gp,
             I * gp, -2 * mu, -I * gp, -wa - 2 * mu;
    }
    return C;
}

ModePolaritons diagonalize_wavenumber(const SystemParams& p, double ck, int j) {
    if (!(ck > 0)) throw DomainError("diagonalize_wavenumber: ck must be > 0");
    if (p.coupling_g == 0.0) return decoupled(p, ck, j);

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(commutator_matrix(p, ck).transpose());
    if (es.info() != Eigen::Success)
        throw DegenerateInputError("Hopfield eigensolve did not converge");

    std::vector<HopfieldBranch> found;
    for (int i = 0; i < 4; ++i) {
        const cplx ev = es.eigenvalues()(i);
        Eigen::Vector4cd v = es.eigenvectors().col(i);
        const double nrm = std::norm(v(0)) + std::norm(v(1)) - std::norm(v(2)) - std::norm(v(3));
        if (!(ev.real() > 0) || !(nrm > 0)) continue;
        v /= std::sqrt(nrm);
        // fix the phase: w real >= 0 (velocity) or x real >= 0 (length)
        const cplx ref = p.gauge == Gauge::Velocity ? v(0) : v(1);
        if (std::abs(ref) > 0) v *= std::abs(ref) / ref;
        HopfieldBranch b;
        b.j = j;
        b.omega = ev.real();
        b.w = v(0);
        b.x = v(1);
        b.y = v(2);
        b.z = v(3);
        fill_derived(b);
        found.push_back(b);
    }
    if (found.size() != 2)
        throw DegenerateInputError("Hopfield eigensolve gave " + std::to_string(found.size()) +
                                   " positive-norm positive-frequency solutions, expected 2");
    std::sort(found.begin(), found.end(),
              [](const HopfieldBranch& a, const HopfieldBranch& b) { return a.omega < b.omega; });
    found[0].zeta = Branch::Lower;
    found[1].zeta = Branch::Upper;
    return {found[0], found[1]};
}

ModePolaritons diagonalize_mode(const SystemParams& p, int j) {
    if (j < 1 || j > p.n_modes)
        throw DomainError("diagonalize_mode: j = " + std::to_string(j) + " outside 1.." +
                          std::to_string(p.n_modes));
    return diagonalize_wavenumber(p, mode_wavenumber(p, j), j);
}

std::vector<ModePolaritons> diagonalize_all(const SystemParams& p, int threads) {
    std::vector<ModePolaritons> out(p.n_modes);
    parallel_for(p.n_modes, threads, [&](std::size_t i) {
        out[i] = diagonalize_mode(p, static_cast<int>(i) + 1);
    });
    return out;
}

std::array<double, 2> polariton_frequencies(const SystemParams& p, double ck) {
    const double wa2 = p.omega_a * p.omega_a;
    const double s = ck * ck;
    const double b = s + wa2 * (1 + 4 * p.coupling_g * p.coupling_g);
    const double disc = std::sqrt(b * b - 4 * s * wa2);
    const double upper2 = 0.5 * (b + disc);
    const double lower2 = s * wa2 / upper2; // product of roots, avoids cancellation
    return {std::sqrt(lower2), std::sqrt(upper2)};
}

LoweringCoefficients lowering_coefficients(const ModePolaritons& mode) {
    LoweringCoefficients c;
    c.j = mode.lower.j;
    for (int z = 0; z < 2; ++z) {
        c.Q[z] = mode[z].Q;
        c.X[z] = mode[z].X;
    }
    return c;
}

std::vector<LoweringCoefficients> lowering_coefficients(const std::vector<ModePolaritons>& modes) {
    std::vector<LoweringCoefficients> out;
    out.reserve(modes.size());
    for (const auto& m : modes) out.push_back(lowering_coefficients(m));
    return out;
}

Eigen::Vector4cd bare_expansion(const ModePolaritons& mode, const std::array<cplx, 2>& c) {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    for (int z = 0; z < 2; ++z) {
        const auto& b = mode[z];
        v += c[z] * Eigen::Vector4cd(b.w, b.x, b.y, b.z);
    }
    return v;
}

} // namespace uscav
