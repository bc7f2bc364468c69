// params_io.cpp — config text and JSON serialization of SystemParams
#include "uscav/params_io.hpp"
#include "uscav/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace uscav {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

double parse_double(const std::string& text, int line, const std::string& field) {
    const std::string t = trim(text);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("not a number: '" + t + "'", line, field);
    return v;
}

int parse_int(const std::string& text, int line, const std::string& field) {
    const std::string t = trim(text);
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("not an integer: '" + t + "'", line, field);
    return v;
}

std::vector<ConfigEntry> parse_key_value(const std::string& text) {
    std::vector<ConfigEntry> out;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        ConfigEntry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
        if (e.key.empty()) throw ConfigError("empty key", line);
        if (e.value.empty()) throw ConfigError("empty value", line, e.key);
        for (const auto& prev : out)
            if (prev.key == e.key) throw ConfigError("duplicate key", line, e.key);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ConfigEntry> read_key_value_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_key_value(ss.str());
}

SystemParams apply_config(const std::vector<ConfigEntry>& entries, SystemParams p,
                          const std::vector<std::string>& extra_keys) {
    for (const auto& e : entries) {
        const auto& k = e.key;
        if (k == "omega_a") p.omega_a = parse_double(e.value, e.line, k);
        else if (k == "coupling_g") p.coupling_g = parse_double(e.value, e.line, k);
        else if (k == "gamma") p.gamma = parse_double(e.value, e.line, k);
        else if (k == "lambda0") p.lambda0 = parse_double(e.value, e.line, k);
        else if (k == "cav_len") p.cav_len = parse_double(e.value, e.line, k);
        else if (k == "n_modes") p.n_modes = parse_int(e.value, e.line, k);
        else if (k == "n_env") p.n_env = parse_double(e.value, e.line, k);
        else if (k == "gauge") {
            try {
                p.gauge = gauge_from_string(e.value);
            } catch (const ConfigError&) {
                throw ConfigError("expected 'velocity' or 'length'", e.line, k);
            }
        } else if (k == "units") {
            if (e.value != kUnitConvention)
                throw ConfigError(std::string("only ") + kUnitConvention + " is supported", e.line, k);
        } else if (std::find(extra_keys.begin(), extra_keys.end(), k) == extra_keys.end()) {
            throw ConfigError("unknown key", e.line, k);
        }
    }
    try {
        p.validate();
    } catch (const ConfigError& err) {
        // re-attach the line of the offending key when we have it
        for (const auto& e : entries)
            if (e.key == err.field())
                throw ConfigError("invalid value '" + e.value + "'", e.line, e.key);
        throw;
    }
    return p;
}

std::string to_config_text(const SystemParams& p) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "units = " << kUnitConvention << '\n'
       << "omega_a = " << p.omega_a << '\n'
       << "coupling_g = " << p.coupling_g << '\n'
       << "gamma = " << p.gamma << '\n'
       << "lambda0 = " << p.lambda0 << '\n'
       << "cav_len = " << p.cav_len << '\n'
       << "n_modes = " << p.n_modes << '\n'
       << "gauge = " << to_string(p.gauge) << '\n'
       << "n_env = " << p.n_env << '\n';
    return os.str();
}

nlohmann::json to_json(const SystemParams& p) {
    return {{"units", kUnitConvention},
            {"omega_a", p.omega_a},
            {"coupling_g", p.coupling_g},
            {"gamma", p.gamma},
            {"lambda0", p.lambda0},
            {"cav_len", p.cav_len},
            {"n_modes", p.n_modes},
            {"gauge", to_string(p.gauge)},
            {"n_env", p.n_env}};
}

SystemParams params_from_json(const nlohmann::json& j) {
    SystemParams p;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k == "units") {
                if (it->get<std::string>() != kUnitConvention)
                    throw ConfigError("unsupported unit convention", 0, k);
            } else if (k == "omega_a") p.omega_a = it->get<double>();
            else if (k == "coupling_g") p.coupling_g = it->get<double>();
            else if (k == "gamma") p.gamma = it->get<double>();
            else if (k == "lambda0") p.lambda0 = it->get<double>();
            else if (k == "cav_len") p.cav_len = it->get<double>();
            else if (k == "n_modes") p.n_modes = it->get<int>();
            else if (k == "gauge") p.gauge = gauge_from_string(it->get<std::string>());
            else if (k == "n_env") p.n_env = it->get<double>();
            else throw ConfigError("unknown key", 0, k);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad JSON value: ") + e.what());
    }
    p.validate();
    return p;
}

} // namespace uscav
