// model.hpp — physical parameters and derived cavity/medium quantities
//
// Units: omega_a = c = hbar = 1 unless omega_a is set otherwise; lengths are
// in c/omega_a. Every function here is pure.
#pragma once

#include <complex>
#include <string>
#include <vector>

namespace uscav {

using cplx = std::complex<double>;

enum class Gauge { Velocity, Length };

std::string to_string(Gauge g);
Gauge gauge_from_string(const std::string& s);

struct SystemParams {
    double omega_a = 1.0;
    double coupling_g = 1.0;
    double gamma = 0.5;
    double lambda0 = 1e3;
    double cav_len = 3.14159265358979323846;
    int n_modes = 400;
    Gauge gauge = Gauge::Velocity;
    double n_env = 0.0;

    // throws ConfigError naming the offending field
    void validate() const;
};

inline constexpr const char* kUnitConvention = "omega_a=c=hbar=1";

struct ComplexDielectric {
    cplx value;
    double frequency;
};

// k_j = j pi / l, j = 1..J
std::vector<double> mode_wavenumbers(const SystemParams& p);
double mode_wavenumber(const SystemParams& p, int j);

// kappa_j = 2 c^2 k_j / (l Lambda0^2 omega_a); independent of omega
std::vector<double> cavity_loss_rates(const SystemParams& p);

// kappa_j(omega) = 2 c^2 k_j / (omega l Lambda(omega)^2), evaluated literally;
// equals cavity_loss_rates()[j-1] for the Lambda(omega) family used here
double loss_rate_at(const SystemParams& p, int j, double omega);

bool is_good_cavity(const SystemParams& p);
std::vector<std::string> diagnostics(const SystemParams& p);

// Lambda(omega) = Lambda0 sqrt(omega_a / omega)
double mirror_lambda(const SystemParams& p, double omega);
double mirror_reflectance(const SystemParams& p, double omega);

ComplexDielectric dielectric(const SystemParams& p, double omega);
// branch with Im n >= 0
cplx refractive_index(const SystemParams& p, double omega);
cplx refractive_index(cplx eps);

// per-mode coupling constants of the two Hamiltonian forms
double coupling_velocity(const SystemParams& p, double ck); // G omega_a sqrt(omega_a/ck)
double coupling_length(const SystemParams& p, double ck);   // G ck sqrt(omega_a/ck)

} // namespace uscav
