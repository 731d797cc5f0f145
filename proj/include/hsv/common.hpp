#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsv {

// Exit-code categories used by the CLI: 2 = bad input, 3 = numeric failure.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline constexpr double neg_inf() { return -std::numeric_limits<double>::infinity(); }

}  // namespace hsv
