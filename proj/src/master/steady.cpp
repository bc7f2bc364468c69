// steady.cpp — bordered linear solve for L[rho] = 0 with Tr rho = 1
#include "uscav/master/steady.hpp"
#include "uscav/errors.hpp"

#include <Eigen/LU>

#include <cmath>

namespace uscav {

namespace {

SteadyState relax(const Liouvillian& L, const SteadyStateOptions& opt) {
    const auto& sys = L.system();
    BlockState rho = L.to_state(sys.ground_state() * sys.ground_state().adjoint());
    BlockState out;
    Liouvillian::Workspace ws;
    double t = 0, res = 0;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(opt.chunk / opt.step)));
    while (t < opt.max_time) {
        advance(L, rho, opt.chunk, nsteps, Integrator::RK4); // RK4 keeps fixed points of L exactly
        t += opt.chunk;
        L.apply(rho, out, ws);
        res = out.norm();
        if (!std::isfinite(res)) throw IntegrationError("steady state relaxation diverged", t, opt.step);
        if (res < opt.tol) break;
    }
    if (res >= opt.tol)
        throw IntegrationError("steady state relaxation did not converge, residual " + std::to_string(res), t,
                               opt.step);
    rho.hermitize();
    const cplx tr = rho.trace();
    for (auto& m : rho.b) m /= tr;
    SteadyState ss;
    ss.rho.matrix = L.to_fock(rho);
    ss.rho.time = t;
    ss.residual = L.residual(ss.rho.matrix);
    ss.relaxed = true;
    return ss;
}

} // namespace

SteadyState steady_state(const Liouvillian& L, const SteadyStateOptions& opt) {
    const auto n = L.superoperator_sizes();
    const Eigen::Index total = Eigen::Index(n[0]) * n[0] + Eigen::Index(n[1]) * n[1];
    if (total > opt.max_dense) return relax(L, opt);

    Eigen::MatrixXcd M = L.superoperator();
    const std::array<Eigen::Index, 2> off = {0, Eigen::Index(n[0]) * n[0]};
    M.row(0).setZero();
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < n[s]; ++i) M(0, off[s] + Eigen::Index(i) * n[s] + i) = 1.0;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(total);
    rhs(0) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    const double rc = lu.rcond();
    if (!(rc > opt.rcond_tol))
        throw AmbiguityError("steady state is not unique (rcond " + std::to_string(rc) + ")", {rc});
    const Eigen::VectorXcd x = lu.solve(rhs);
    if (!x.allFinite()) throw AmbiguityError("steady state solve produced non-finite values", {rc});

    // back to the internal layout
    const auto& space = L.system().space();
    const bool pad = L.basis() == Basis::Fock && space.padded();
    BlockState rho = BlockState::zero(L.sizes());
    for (int s = 0; s < 2; ++s) {
        const auto& phys = space.physical(s);
        for (int c = 0; c < n[s]; ++c)
            for (int r = 0; r < n[s]; ++r) {
                const cplx v = x(off[s] + Eigen::Index(c) * n[s] + r);
                if (pad) rho.b[s](phys[r], phys[c]) = v;
                else rho.b[s](r, c) = v;
            }
    }
    rho.hermitize();
    const cplx tr = rho.trace();
    for (auto& m : rho.b) m /= tr;

    SteadyState ss;
    ss.rho.matrix = L.to_fock(rho);
    ss.residual = L.residual(ss.rho.matrix);
    ss.rcond = rc;
    return ss;
}

double gibbs_residual(const Liouvillian& L, double temperature) {
    if (!(temperature > 0)) throw DomainError("gibbs_residual: temperature must be > 0");
    return L.residual(L.system().gibbs_state(temperature));
}

} // namespace uscav
