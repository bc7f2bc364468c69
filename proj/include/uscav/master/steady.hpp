// steady.hpp — stationary states of a Liouvillian and thermal-state checks
#pragma once

#include "uscav/master/evolve.hpp"

namespace uscav {

struct SteadyStateOptions {
    Eigen::Index max_dense = 8000; // superoperator dimension limit for the direct solve
    double rcond_tol = 1e-13;      // below this the kernel is treated as degenerate
    // relaxation fallback for larger systems
    double step = 0.01;
    double chunk = 5.0;
    double max_time = 5000.0;
    double tol = 1e-9;             // ||L[rho]||_F accepted by the fallback
};

struct SteadyState {
    DensityMatrix rho;
    double residual = 0;   // ||L[rho]||_F
    double rcond = 0;      // reciprocal condition estimate of the bordered system
    bool relaxed = false;  // produced by the evolution fallback
};

SteadyState steady_state(const Liouvillian& L, const SteadyStateOptions& opt = {});

// ||L[rho_G]||_F for the Gibbs state of the system Hamiltonian at temperature T
double gibbs_residual(const Liouvillian& L, double temperature);

} // namespace uscav
