// mbc.cpp — Maxwell-boundary-condition reflection and damped dispersion roots
#include "uscav/mbc.hpp"
#include "uscav/errors.hpp"
#include "uscav/parallel.hpp"

#include <cmath>

namespace uscav {

namespace {

const cplx I(0.0, 1.0);

struct AnalyticPolaritons {
    cplx wl, wu;   // frequencies
    cplx xl2, xu2; // exciton weights |X|^2
};

// Polariton frequencies and exciton weights as analytic functions of
// s = c^2 k^2. The weights are the residues of the exciton-exciton response
// 2 wa (w^2 - s) / ((w^2 - wl^2)(w^2 - wu^2)).
AnalyticPolaritons analytic_polaritons(const SystemParams& p, cplx s) {
    const double wa2 = p.omega_a * p.omega_a;
    const cplx b = s + wa2 * (1 + 4 * p.coupling_g * p.coupling_g);
    const cplx disc = std::sqrt(b * b - 4.0 * s * wa2);
    const cplx wu2 = 0.5 * (b + disc);
    const cplx wl2 = s * wa2 / wu2;
    AnalyticPolaritons out;
    out.wl = std::sqrt(wl2);
    out.wu = std::sqrt(wu2);
    const cplx gap = wu2 - wl2;
    out.xl2 = p.omega_a * (s - wl2) / (out.wl * gap);
    out.xu2 = p.omega_a * (wu2 - s) / (out.wu * gap);
    return out;
}

} // namespace

std::string to_string(Treatment t) { return t == Treatment::Lindblad ? "lindblad" : "non-lindblad"; }
std::string short_label(Treatment t) { return t == Treatment::Lindblad ? "l" : "nl"; }

ReflectionPoint reflection_for_index(const SystemParams& p, double omega, cplx n) {
    const double lam = mirror_lambda(p, omega);
    const cplx phase = n * omega * p.cav_len;
    const cplx sn = std::sin(phase);
    const cplx cs = std::cos(phase);
    const cplx num = (1.0 + I * lam) * sn - I * n * cs;
    const cplx den = (1.0 - I * lam) * sn + I * n * cs;
    const double den2 = std::norm(den);
    if (!(std::sqrt(den2) >= 1e-30))
        throw SingularPointError("reflection denominator vanishes", omega);
    // |den|^2 - |num|^2 = 4 Im(sin * conj(n cos)), exact for real Lambda
    const double absorb = 4.0 * (sn * std::conj(n * cs)).imag() / den2;
    return {num / den, absorb};
}

ReflectionPoint reflection_point(const SystemParams& p, double omega) {
    return reflection_for_index(p, omega, refractive_index(p, omega));
}

cplx reflection_coefficient(const SystemParams& p, double omega) {
    return reflection_point(p, omega).r;
}

cplx lindblad_damping_determinant(const SystemParams& p, double omega, cplx s) {
    const auto a = analytic_polaritons(p, s);
    const cplx dl = omega - a.wl;
    const cplx du = omega - a.wu;
    return dl * du + I * (0.5 * p.gamma) * (dl * a.xu2 + du * a.xl2);
}

DispersionRoot lindblad_damping_dispersion(const SystemParams& p, double omega,
                                           std::optional<cplx> seed_k, const NewtonOptions& opt) {
    if (!(omega > 0)) throw DomainError("lindblad_damping_dispersion: omega must be > 0");
    cplx s = seed_k ? (*seed_k) * (*seed_k) : omega * omega * dielectric(p, omega).value;
    auto f = [&](cplx v) { return lindblad_damping_determinant(p, omega, v); };

    cplx fs = f(s);
    for (int it = 1; it <= opt.max_iter; ++it) {
        const double h = 1e-6 * std::max(1.0, std::abs(s));
        const cplx df = (f(s + h) - f(s - h)) / (2.0 * h);
        if (df == 0.0 || !std::isfinite(std::abs(df))) break;
        const cplx step = fs / df;
        s -= step;
        fs = f(s);
        if (std::abs(step) <= opt.tol * std::max(1.0, std::abs(s)) && std::abs(fs) < opt.residual_tol) {
            cplx k = std::sqrt(s);
            if (k.imag() < 0 || (k.imag() == 0 && k.real() < 0)) k = -k;
            return {k, std::abs(fs), it};
        }
    }
    throw RootFailureError("Newton iteration for the damped dispersion did not converge at omega = " +
                               std::to_string(omega),
                           std::sqrt(s), std::abs(fs));
}

std::vector<std::optional<DispersionRoot>> lindblad_damping_branch(const SystemParams& p,
                                                                   const std::vector<double>& grid,
                                                                   const NewtonOptions& opt) {
    check_grid(grid);
    std::vector<std::optional<DispersionRoot>> out(grid.size());
    std::optional<cplx> seed;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            out[i] = lindblad_damping_dispersion(p, grid[i], seed, opt);
            seed = out[i]->k;
        } catch (const RootFailureError&) {
            // restart continuation from the non-Lindblad seed at the next point
            seed.reset();
        }
    }
    return out;
}

SpectrumTable absorption_spectrum(const SystemParams& p, const std::vector<double>& grid,
                                  Treatment damping, int threads) {
    check_grid(grid);
    SpectrumTable t;
    t.method = "mbc";
    t.damping = to_string(damping);
    t.params = p;
    t.rows.resize(grid.size());

    std::vector<std::optional<DispersionRoot>> roots;
    if (damping == Treatment::Lindblad) roots = lindblad_damping_branch(p, grid);

    parallel_for(grid.size(), threads, [&](std::size_t i) {
        SpectrumRow& row = t.rows[i];
        row.omega = grid[i];
        cplx n;
        if (damping == Treatment::Lindblad) {
            if (!roots[i]) {
                row.flag = RowFlag::RootFailure;
                return;
            }
            n = roots[i]->k / grid[i];
        } else {
            n = refractive_index(p, grid[i]);
        }
        try {
            const auto pt = reflection_for_index(p, grid[i], n);
            row.r = pt.r;
            row.absorption = pt.absorption;
        } catch (const SingularPointError&) {
            row.flag = RowFlag::Singular;
        }
    });
    return t;
}

} // namespace uscav
