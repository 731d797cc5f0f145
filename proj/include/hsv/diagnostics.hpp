#pragma once

#include <utility>
#include <vector>

namespace hsv {

// Inefficiency factor: variance inflation of the MCMC sample mean relative to
// an iid sample. Parzen lag-window estimate; bandwidth defaults to
// 4 * (n/100)^(1/4). Constant series have IF defined as 0.
double inefficiency_factor(const std::vector<double>& draws, double bandwidth = 0.0);

// Shortest interval containing `level` mass of the sorted draws.
std::pair<double, double> hpd_interval(const std::vector<double>& draws, double level);

// Marginal posterior mean.
double mpm(const std::vector<double>& draws);

// Standardized cumulative deviation path: cs_k = sum_{i<=k}(x_i - mean) / (sd sqrt(n)).
std::vector<double> cusum_path(const std::vector<double>& draws);

}  // namespace hsv
