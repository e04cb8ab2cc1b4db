#pragma once

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "pdegen/errors.hpp"

namespace pdegen::io {

/// Aligned plain-text key/value table with full (17 significant digit)
/// precision and deterministic (sorted) key order.
inline std::string report_table(const std::map<std::string, double>& values) {
    std::size_t width = 0;
    for (const auto& [k, v] : values) width = std::max(width, k.size());
    std::ostringstream os;
    for (const auto& [k, v] : values) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << k << std::string(width - k.size() + 2, ' ') << buf << "\n";
    }
    return os.str();
}

/// Writes the report both as an aligned text table (path + ".txt") and as
/// JSON (path + ".json"); JSON floats round-trip losslessly.
inline void emit_report(const std::map<std::string, double>& values, const std::string& path_stem,
                        const std::map<std::string, std::string>& metadata = {}) {
    {
        std::ofstream txt(path_stem + ".txt");
        if (!txt) throw IoError("cannot write " + path_stem + ".txt");
        txt << report_table(values);
    }
    nlohmann::json j;
    j["metrics"] = values;
    if (!metadata.empty()) j["metadata"] = metadata;
    std::ofstream js(path_stem + ".json");
    if (!js) throw IoError("cannot write " + path_stem + ".json");
    js << j.dump(2) << "\n";
}

inline std::map<std::string, double> read_report(const std::string& path_stem) {
    std::ifstream js(path_stem + ".json");
    if (!js) throw IoError("cannot read " + path_stem + ".json");
    nlohmann::json j;
    js >> j;
    std::map<std::string, double> out;
    for (const auto& [k, v] : j.at("metrics").items()) out[k] = v.get<double>();
    return out;
}

}  // namespace pdegen::io
