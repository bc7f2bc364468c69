// params_io.hpp — SystemParams <-> key/value config text and JSON
//
// Config grammar: one `key = value` per line; `#` starts a comment; blank
// lines ignored; keys are the SystemParams field names plus `units`, whose
// value (if present) must be "omega_a=c=hbar=1".
#pragma once

#include "uscav/model.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace uscav {

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

std::vector<ConfigEntry> parse_key_value(const std::string& text);
std::vector<ConfigEntry> read_key_value_file(const std::string& path);

// Applies the SystemParams keys in `entries` on top of `base`. Keys listed in
// `extra_keys` are skipped; anything else unknown is a ConfigError.
SystemParams apply_config(const std::vector<ConfigEntry>& entries,
                          SystemParams base = {},
                          const std::vector<std::string>& extra_keys = {});

std::string to_config_text(const SystemParams& p);

nlohmann::json to_json(const SystemParams& p);
SystemParams params_from_json(const nlohmann::json& j);

double parse_double(const std::string& text, int line, const std::string& field);
int parse_int(const std::string& text, int line, const std::string& field);

} // namespace uscav
