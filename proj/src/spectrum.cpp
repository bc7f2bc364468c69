// spectrum.cpp — grids and CSV/JSON output of spectrum tables
#include "uscav/spectrum.hpp"
#include "uscav/errors.hpp"
#include "uscav/params_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#ifndef USCAV_VERSION
#define USCAV_VERSION "0.0.0"
#endif

namespace uscav {

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 1) throw DomainError("grid count must be >= 1");
    if (count == 1) return {lo};
    std::vector<double> g(count);
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) g[i] = lo + i * step;
    g.back() = hi;
    return g;
}

std::vector<double> parse_grid(const std::string& spec) {
    const auto a = spec.find(':');
    const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw ConfigError("grid must be min:max:count, got '" + spec + "'", 0, "grid");
    const double lo = parse_double(spec.substr(0, a), 0, "grid");
    const double hi = parse_double(spec.substr(a + 1, b - a - 1), 0, "grid");
    const int n = parse_int(spec.substr(b + 1), 0, "grid");
    if (!(lo > 0) || !(hi > lo) || n < 2)
        throw ConfigError("grid needs 0 < min < max and count >= 2", 0, "grid");
    return linear_grid(lo, hi, n);
}

void check_grid(const std::vector<double>& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0)) throw DomainError("grid values must be > 0");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");
    }
}

std::string to_string(RowFlag f) {
    switch (f) {
    case RowFlag::Ok: return "ok";
    case RowFlag::Singular: return "singular";
    case RowFlag::RootFailure: return "root-failure";
    case RowFlag::DiffGuard: return "diff-guard";
    }
    return "?";
}

std::size_t SpectrumTable::flagged_count() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.flag != RowFlag::Ok;
    return n;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string version_line() { return std::string("# uscav ") + USCAV_VERSION; }

std::string csv_header_comment(const SpectrumTable& t) {
    nlohmann::json meta = {{"method", t.method}, {"damping", t.damping}, {"params", to_json(t.params)}};
    return version_line() + "\n# " + meta.dump() + "\n";
}

void write_csv(std::ostream& os, const SpectrumTable& t) {
    os << csv_header_comment(t) << "omega,re_r,im_r,absorption,flag\n";
    for (const auto& row : t.rows) {
        const bool ok = row.flag == RowFlag::Ok;
        const double nan = std::nan("");
        os << format_double(row.omega) << ',' << format_double(ok ? row.r.real() : nan) << ','
           << format_double(ok ? row.r.imag() : nan) << ','
           << format_double(ok ? row.absorption : nan) << ',' << to_string(row.flag) << '\n';
    }
}

void write_csv(const std::string& path, const SpectrumTable& t) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    write_csv(f, t);
}

nlohmann::json sidecar_json(const SpectrumTable& t) {
    return {{"version", USCAV_VERSION},
            {"method", t.method},
            {"damping", t.damping},
            {"params", to_json(t.params)},
            {"rows", t.rows.size()},
            {"flagged", t.flagged_count()}};
}

} // namespace uscav
