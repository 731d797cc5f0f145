#include "hsv/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "hsv/common.hpp"
#include "hsv/stats.hpp"

namespace hsv {

namespace {

double parzen(double u) {
    u = std::abs(u);
    if (u <= 0.5) return 1.0 - 6.0 * u * u + 6.0 * u * u * u;
    if (u <= 1.0) return 2.0 * std::pow(1.0 - u, 3.0);
    return 0.0;
}

}  // namespace

double inefficiency_factor(const std::vector<double>& draws, double bandwidth) {
    const std::size_t n = draws.size();
    if (n < 2) return 0.0;
    const double m = mean(draws);
    double c0 = 0.0;
    for (double x : draws) c0 += (x - m) * (x - m);
    c0 /= static_cast<double>(n);
    // Constant draws (up to roundoff in the mean): degenerate, defined as 0.
    const double eps = 1e-14 * std::max(1.0, std::abs(m));
    if (c0 <= eps * eps) return 0.0;

    if (bandwidth <= 0.0) bandwidth = 4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25);
    const auto max_lag = std::min<std::size_t>(static_cast<std::size_t>(bandwidth), n - 1);
    double s = 0.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = k; t < n; ++t) ck += (draws[t] - m) * (draws[t - k] - m);
        ck /= static_cast<double>(n);
        s += parzen(static_cast<double>(k) / (bandwidth + 1.0)) * (ck / c0);
    }
    return std::max(0.0, 1.0 + 2.0 * s);
}

std::pair<double, double> hpd_interval(const std::vector<double>& draws, double level) {
    if (draws.empty()) throw InputError("hpd_interval: empty sample");
    if (!(level > 0.0 && level < 1.0)) throw InputError("hpd_interval: level outside (0,1)");
    std::vector<double> v(draws);
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    auto k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n);
    if (k == n) return {v.front(), v.back()};
    std::size_t best = 0;
    double best_width = v[k - 1] - v[0];
    for (std::size_t i = 1; i + k <= n; ++i) {
        const double w = v[i + k - 1] - v[i];
        if (w < best_width) {
            best_width = w;
            best = i;
        }
    }
    return {v[best], v[best + k - 1]};
}

double mpm(const std::vector<double>& draws) {
    if (draws.empty()) throw InputError("mpm: empty sample");
    return mean(draws);
}

std::vector<double> cusum_path(const std::vector<double>& draws) {
    const std::size_t n = draws.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    const double m = mean(draws);
    double sd = std::sqrt(variance(draws));
    if (sd <= 0.0) sd = 1.0;  // constant series: path is identically zero
    const double scale = sd * std::sqrt(static_cast<double>(n));
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += draws[i] - m;
        out[i] = acc / scale;
    }
    return out;
}

}  // namespace hsv
