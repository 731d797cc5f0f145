#pragma once

#include <map>
#include <string>

namespace hsv {

// Flat `key = value` configuration with dotted section prefixes
// (`prior.`, `chain.`, `sim.`, `forecast.`). '#' starts a comment.
class Config {
  public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Deterministic emission (sorted keys); parse(emit(c)) == c.
    std::string emit() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

}  // namespace hsv
