// evolve.hpp — fixed-step fourth-order time evolution with a Richardson step check
#pragma once

#include "uscav/master/liouvillian.hpp"

#include <Eigen/Dense>

#include <vector>

namespace uscav {

struct DensityMatrix {
    Eigen::MatrixXcd matrix; // physical Fock ordering
    double time = 0;
};

DensityMatrix fock_projector(const FockSpace& space, int n_a, int n_b);

enum class Integrator {
    RK4,      // classical Runge-Kutta on the full generator
    LawsonRK4 // RK4 in the frame of the diagonal part of K, which is propagated exactly
};

struct EvolveOptions {
    Integrator integrator = Integrator::LawsonRK4;
    double step = 0.01;
    bool step_check = true;       // Richardson halving on the first interval
    double richardson_tol = 1e-9; // Frobenius error estimate accepted
    double min_step = 1e-5;
    bool track_min_eigenvalue = true;
};

struct TrajectoryPoint {
    double time = 0;
    double photon_number = 0;
    double min_eigenvalue = 0;
    double trace_error = 0;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    double step = 0;             // step actually used
    double richardson_error = 0; // estimate on the probe interval
    DensityMatrix final_state;

    double max_violation() const;          // max over t of -min(0, min eigenvalue)
    double time_of_max_violation() const;
    double integrated_violation() const;   // trapezoid of the violation over t
    double max_trace_error() const;
};

// t_grid increasing; the first entry is the time of rho0
Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& L, const std::vector<double>& t_grid,
                  const EvolveOptions& opt = {});

// advances the internal state by `duration` with `nsteps` fixed steps
void advance(const Liouvillian& L, BlockState& rho, double duration, int nsteps,
             Integrator integrator = Integrator::LawsonRK4);

} // namespace uscav
