// model.cpp — derived quantities of SystemParams
#include "uscav/model.hpp"
#include "uscav/errors.hpp"

#include <cmath>
#include <numbers>

namespace uscav {

std::string to_string(Gauge g) {
    return g == Gauge::Velocity ? "velocity" : "length";
}

Gauge gauge_from_string(const std::string& s) {
    if (s == "velocity" || s == "Velocity") return Gauge::Velocity;
    if (s == "length" || s == "Length") return Gauge::Length;
    throw ConfigError("expected 'velocity' or 'length', got '" + s + "'", 0, "gauge");
}

void SystemParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(omega_a > 0) || !finite(omega_a)) throw ConfigError("must be > 0", 0, "omega_a");
    if (!(coupling_g >= 0) || !finite(coupling_g)) throw ConfigError("must be >= 0", 0, "coupling_g");
    if (!(gamma >= 0) || !finite(gamma)) throw ConfigError("must be >= 0", 0, "gamma");
    if (!(lambda0 > 0) || !finite(lambda0)) throw ConfigError("must be > 0", 0, "lambda0");
    if (!(cav_len > 0) || !finite(cav_len)) throw ConfigError("must be > 0", 0, "cav_len");
    if (n_modes < 1) throw ConfigError("must be >= 1", 0, "n_modes");
    if (!(n_env >= 0) || !finite(n_env)) throw ConfigError("must be >= 0", 0, "n_env");
}

double mode_wavenumber(const SystemParams& p, int j) {
    return j * std::numbers::pi / p.cav_len;
}

std::vector<double> mode_wavenumbers(const SystemParams& p) {
    std::vector<double> k(p.n_modes);
    for (int j = 1; j <= p.n_modes; ++j) k[j - 1] = mode_wavenumber(p, j);
    return k;
}

std::vector<double> cavity_loss_rates(const SystemParams& p) {
    std::vector<double> kappa(p.n_modes);
    const double scale = 2.0 / (p.cav_len * p.lambda0 * p.lambda0 * p.omega_a);
    for (int j = 1; j <= p.n_modes; ++j) kappa[j - 1] = scale * mode_wavenumber(p, j);
    return kappa;
}

double loss_rate_at(const SystemParams& p, int j, double omega) {
    const double lam = mirror_lambda(p, omega);
    return 2.0 * mode_wavenumber(p, j) / (omega * p.cav_len * lam * lam);
}

bool is_good_cavity(const SystemParams& p) { return p.lambda0 >= 10.0; }

std::vector<std::string> diagnostics(const SystemParams& p) {
    std::vector<std::string> out;
    if (!is_good_cavity(p))
        out.push_back("bad-cavity: lambda0 = " + std::to_string(p.lambda0) +
                      " < 10, the cavity-loss Hamiltonian is outside its range of validity");
    return out;
}

double mirror_lambda(const SystemParams& p, double omega) {
    if (!(omega > 0)) throw DomainError("mirror_lambda: omega must be > 0");
    return p.lambda0 * std::sqrt(p.omega_a / omega);
}

double mirror_reflectance(const SystemParams& p, double omega) {
    const double lam = mirror_lambda(p, omega);
    return 1.0 / (1.0 + 4.0 / (lam * lam));
}

ComplexDielectric dielectric(const SystemParams& p, double omega) {
    if (!(omega > 0)) throw DomainError("dielectric: omega must be > 0");
    const double wa = p.omega_a;
    const cplx den(wa * wa - omega * omega, -p.gamma * wa);
    return {1.0 + 4.0 * p.coupling_g * p.coupling_g * wa * wa / den, omega};
}

cplx refractive_index(cplx eps) {
    cplx n = std::sqrt(eps);
    if (n.imag() < 0 || (n.imag() == 0 && n.real() < 0)) n = -n;
    return n;
}

cplx refractive_index(const SystemParams& p, double omega) {
    return refractive_index(dielectric(p, omega).value);
}

double coupling_velocity(const SystemParams& p, double ck) {
    return p.coupling_g * p.omega_a * std::sqrt(p.omega_a / ck);
}

double coupling_length(const SystemParams& p, double ck) {
    return p.coupling_g * ck * std::sqrt(p.omega_a / ck);
}

} // namespace uscav
