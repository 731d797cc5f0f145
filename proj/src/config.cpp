#include "hsv/config.hpp"

#include <fstream>
#include <sstream>

#include "hsv/common.hpp"
#include "hsv/csv.hpp"

namespace hsv {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(lineno) + ": missing '='");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw InputError("config line " + std::to_string(lineno) + ": empty key");
        c.kv_[key] = value;
    }
    return c;
}

std::string Config::get_str(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : parse_double(it->second);
}

long Config::get_int(const std::string& key, long fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : std::stol(it->second);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return it->second == "1" || it->second == "true" || it->second == "yes";
}

std::string Config::emit() const {
    std::stringstream out;
    for (const auto& [k, v] : kv_) out << k << " = " << v << "\n";
    return out.str();
}

}  // namespace hsv
