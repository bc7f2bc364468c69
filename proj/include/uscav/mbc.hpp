// mbc.hpp — reflection of the delta-mirror Fabry-Perot cavity from Maxwell
// boundary conditions, for a medium given by its complex refractive index
#pragma once

#include "uscav/model.hpp"
#include "uscav/spectrum.hpp"

#include <optional>
#include <vector>

namespace uscav {

enum class Treatment { NonLindblad, Lindblad };
std::string to_string(Treatment t);
std::string short_label(Treatment t); // "nl" / "l"

struct ReflectionPoint {
    cplx r;
    double absorption; // 1 - |r|^2
};

// r for a slab of refractive index n (k' = n omega / c); throws SingularPointError
ReflectionPoint reflection_for_index(const SystemParams& p, double omega, cplx n);

// non-Lindblad damping: n = sqrt(eps(omega))
cplx reflection_coefficient(const SystemParams& p, double omega);
ReflectionPoint reflection_point(const SystemParams& p, double omega);

struct NewtonOptions {
    int max_iter = 60;
    double tol = 1e-14;          // relative step size at convergence
    double residual_tol = 1e-10; // |det| accepted as a root
};

struct DispersionRoot {
    cplx k;            // complex wavenumber k'(omega), Im k' >= 0
    double residual;   // |det| at the root
    int iterations;
};

// det of the damped two-polariton block at wavenumber^2 s = c^2 k^2, continued
// analytically off the real axis
cplx lindblad_damping_determinant(const SystemParams& p, double omega, cplx s);

// complex Newton in s = c^2 k^2, seeded from omega^2 eps(omega) unless `seed_k`
DispersionRoot lindblad_damping_dispersion(const SystemParams& p, double omega,
                                           std::optional<cplx> seed_k = std::nullopt,
                                           const NewtonOptions& opt = {});

// dispersion along a grid with continuation; failed points have k = nan
std::vector<std::optional<DispersionRoot>> lindblad_damping_branch(const SystemParams& p,
                                                                   const std::vector<double>& grid,
                                                                   const NewtonOptions& opt = {});

// method label "mbc"; damping selects eps(omega) or the root-found wavenumber
SpectrumTable absorption_spectrum(const SystemParams& p, const std::vector<double>& grid,
                                  Treatment damping = Treatment::NonLindblad, int threads = 0);

} // namespace uscav
