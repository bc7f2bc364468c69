// evolve.cpp — fixed-step integration of drho/dt = L[rho] and trajectory observables
#include "uscav/master/evolve.hpp"
#include "uscav/errors.hpp"

#include <cmath>

namespace uscav {

namespace {

// Tr(O rho) for a parity-even operator
cplx expectation(const ParityOperator& op, const BlockState& rho) {
    cplx acc = 0.0;
    for (int s = 0; s < 2; ++s) {
        const SubOperator& o = op.block(s);
        if (o.is_dense()) {
            acc += o.dense().cwiseProduct(rho.b[s].transpose()).sum();
            continue;
        }
        for (const auto& b : o.bands()) {
            // sum_p c[p] rho(p - h, p)
            const int n = o.rows();
            for (int p = std::max(0, b.offset); p < std::min(n, n + b.offset); ++p)
                acc += b.coeff(p) * rho.b[s](p - b.offset, p);
        }
    }
    return acc;
}

int steps_for(double duration, double h) {
    return std::max(1, static_cast<int>(std::ceil(duration / h - 1e-9)));
}

bool finite(const BlockState& st) { return st.b[0].allFinite() && st.b[1].allFinite(); }

} // namespace

DensityMatrix fock_projector(const FockSpace& space, int n_a, int n_b) {
    if (n_a < 0 || n_b < 0 || n_a > space.cutoff_photon() || n_b > space.cutoff_exciton())
        throw DomainError("Fock state outside the truncated space");
    DensityMatrix rho;
    rho.matrix = Eigen::MatrixXcd::Zero(space.dimension(), space.dimension());
    const int i = space.index(n_a, n_b);
    rho.matrix(i, i) = 1.0;
    return rho;
}

namespace {

void rk4_steps(const Liouvillian& L, BlockState& rho, double h, int nsteps) {
    Liouvillian::Workspace ws;
    BlockState k, acc, tmp;
    for (int step = 0; step < nsteps; ++step) {
        L.apply(rho, k, ws); // k1
        for (int s = 0; s < 2; ++s) {
            acc.b[s] = k.b[s];
            tmp.b[s] = rho.b[s] + (0.5 * h) * k.b[s];
        }
        L.apply(tmp, k, ws); // k2
        for (int s = 0; s < 2; ++s) {
            acc.b[s] += 2.0 * k.b[s];
            tmp.b[s] = rho.b[s] + (0.5 * h) * k.b[s];
        }
        L.apply(tmp, k, ws); // k3
        for (int s = 0; s < 2; ++s) {
            acc.b[s] += 2.0 * k.b[s];
            tmp.b[s] = rho.b[s] + h * k.b[s];
        }
        L.apply(tmp, k, ws); // k4
        for (int s = 0; s < 2; ++s) rho.b[s] += (h / 6.0) * (acc.b[s] + k.b[s]);
    }
}

// Lawson RK4: with G_ij = i (Im d_i - Im d_j) from the diagonal d of K, the part
// G o rho of L[rho] is integrated exactly and RK4 only sees the remainder.
// G vanishes on the diagonal, so the trace is conserved as in plain RK4.
void lawson_steps(const Liouvillian& L, BlockState& rho, double h, int nsteps) {
    auto d = L.k_diagonal();
    std::array<Eigen::MatrixXcd, 2> g, e, e2;
    for (int s = 0; s < 2; ++s) {
        d[s] = cplx(0, 1) * d[s].imag().cast<cplx>();
        g[s] = d[s].replicate(1, d[s].size()) + d[s].adjoint().replicate(d[s].size(), 1);
        e[s] = (h * g[s]).array().exp().matrix();
        e2[s] = (0.5 * h * g[s]).array().exp().matrix();
    }
    Liouvillian::Workspace ws;
    BlockState k, acc, a, y;
    auto remainder = [&](const BlockState& in) {
        L.apply(in, k, ws);
        for (int s = 0; s < 2; ++s) k.b[s].array() -= g[s].array() * in.b[s].array();
    };
    for (int step = 0; step < nsteps; ++step) {
        remainder(rho); // k1
        for (int s = 0; s < 2; ++s) {
            acc.b[s] = e[s].cwiseProduct(k.b[s]);
            a.b[s] = e2[s].cwiseProduct(rho.b[s]);
            y.b[s] = a.b[s] + (0.5 * h) * e2[s].cwiseProduct(k.b[s]);
        }
        remainder(y); // k2
        for (int s = 0; s < 2; ++s) {
            acc.b[s] += 2.0 * e2[s].cwiseProduct(k.b[s]);
            y.b[s] = a.b[s] + (0.5 * h) * k.b[s];
        }
        remainder(y); // k3
        for (int s = 0; s < 2; ++s) {
            acc.b[s] += 2.0 * e2[s].cwiseProduct(k.b[s]);
            a.b[s] = e[s].cwiseProduct(rho.b[s]);
            y.b[s] = a.b[s] + h * e2[s].cwiseProduct(k.b[s]);
        }
        remainder(y); // k4
        for (int s = 0; s < 2; ++s) rho.b[s] = a.b[s] + (h / 6.0) * (acc.b[s] + k.b[s]);
    }
}

} // namespace

void advance(const Liouvillian& L, BlockState& rho, double duration, int nsteps, Integrator integrator) {
    if (nsteps < 1) throw DomainError("advance: nsteps must be >= 1");
    const double h = duration / nsteps;
    if (integrator == Integrator::LawsonRK4) lawson_steps(L, rho, h, nsteps);
    else rk4_steps(L, rho, h, nsteps);
}

Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& L, const std::vector<double>& t_grid,
                  const EvolveOptions& opt) {
    if (t_grid.empty()) throw DomainError("evolve: empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("evolve: time grid must be increasing");
    if (!(opt.step > 0)) throw DomainError("evolve: step must be > 0");

    const BlockState start = L.to_state(rho0.matrix);
    Trajectory traj;
    double h = opt.step;

    if (opt.step_check && t_grid.size() > 1) {
        const double probe = std::min(t_grid[1] - t_grid[0], 1.0);
        BlockState coarse = start, fine = start;
        advance(L, coarse, probe, steps_for(probe, h), opt.integrator);
        advance(L, fine, probe, steps_for(probe, h / 2), opt.integrator);
        for (;;) {
            BlockState diff = coarse;
            diff.axpy(-1.0, fine);
            traj.richardson_error = diff.norm() * 16.0 / 15.0;
            if (!std::isfinite(traj.richardson_error) || traj.richardson_error > opt.richardson_tol) {
                h /= 2;
                if (h < opt.min_step)
                    throw IntegrationError("step size underflow: Richardson estimate " +
                                               std::to_string(traj.richardson_error) + " at step " +
                                               std::to_string(h),
                                           t_grid[0], h);
                coarse = fine;
                fine = start;
                advance(L, fine, probe, steps_for(probe, h / 2), opt.integrator);
                continue;
            }
            break;
        }
    }
    traj.step = h;

    BlockState rho = start;
    auto record = [&](double t) {
        TrajectoryPoint pt;
        pt.time = t;
        pt.photon_number = expectation(L.photon_number(), rho).real();
        pt.trace_error = std::abs(rho.trace() - 1.0);
        pt.min_eigenvalue = opt.track_min_eigenvalue ? L.min_eigenvalue(rho) : std::nan("");
        traj.points.push_back(pt);
    };
    record(t_grid[0]);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double dt = t_grid[i] - t_grid[i - 1];
        advance(L, rho, dt, steps_for(dt, h), opt.integrator);
        if (!finite(rho)) throw IntegrationError("non-finite density matrix", t_grid[i], h);
        record(t_grid[i]);
    }
    traj.final_state.matrix = L.to_fock(rho);
    traj.final_state.time = t_grid.back();
    return traj;
}

double Trajectory::max_violation() const {
    double v = 0;
    for (const auto& p : points) v = std::max(v, -p.min_eigenvalue);
    return v;
}

double Trajectory::time_of_max_violation() const {
    double v = 0, t = points.empty() ? 0 : points.front().time;
    for (const auto& p : points)
        if (-p.min_eigenvalue > v) {
            v = -p.min_eigenvalue;
            t = p.time;
        }
    return t;
}

double Trajectory::integrated_violation() const {
    double acc = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double a = std::max(0.0, -points[i - 1].min_eigenvalue);
        const double b = std::max(0.0, -points[i].min_eigenvalue);
        acc += 0.5 * (a + b) * (points[i].time - points[i - 1].time);
    }
    return acc;
}

double Trajectory::max_trace_error() const {
    double v = 0;
    for (const auto& p : points) v = std::max(v, p.trace_error);
    return v;
}

} // namespace uscav
