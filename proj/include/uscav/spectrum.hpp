// spectrum.hpp — frequency grids and spectrum tables shared by mbc and langevin
#pragma once

#include "uscav/model.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace uscav {

// count points spaced uniformly on [lo, hi]
std::vector<double> linear_grid(double lo, double hi, int count);
// "min:max:count"
std::vector<double> parse_grid(const std::string& spec);
// throws DomainError unless strictly increasing and positive
void check_grid(const std::vector<double>& grid);

enum class RowFlag { Ok, Singular, RootFailure, DiffGuard };
std::string to_string(RowFlag f);

struct SpectrumRow {
    double omega = 0;
    cplx r;
    double absorption = 0; // 1 - |r|^2, evaluated without cancellation
    RowFlag flag = RowFlag::Ok;
};

struct SpectrumTable {
    std::string method;   // "mbc", "langevin-nl-nl", ...
    std::string damping;  // damping-treatment label
    SystemParams params;
    std::vector<SpectrumRow> rows;

    std::size_t flagged_count() const;
};

// documented slack on absorption >= 0 for the quantum methods
inline constexpr double kAbsorptionSlack = 1e-8;

std::string csv_header_comment(const SpectrumTable& t);
void write_csv(std::ostream& os, const SpectrumTable& t);
void write_csv(const std::string& path, const SpectrumTable& t);
nlohmann::json sidecar_json(const SpectrumTable& t);

std::string format_double(double v); // 15 significant digits
std::string version_line();

} // namespace uscav
