#include "hsv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hsv/common.hpp"

namespace hsv {

double normal_pdf(double x) { return std::exp(-0.5 * x * x - 0.5 * kLogTwoPi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_logcdf(double x) {
    if (x > -8.0) return std::log(normal_cdf(x));
    // Asymptotic expansion for the far lower tail; erfc underflows there.
    const double x2 = x * x;
    return -0.5 * x2 - 0.5 * kLogTwoPi - std::log(-x) + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

double normal_inv_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw NumericError("normal_inv_cdf: p outside [0,1]");
    }
    // Acklam's rational approximation, then one Halley refinement step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p > phigh) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double normal_logpdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * kLogTwoPi;
}

double truncated_normal_logpdf(double x, double mean, double sd) {
    if (x <= 0.0) return neg_inf();
    return normal_logpdf(x, mean, sd) - normal_logcdf(mean / sd);
}

double beta_logpdf(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) return neg_inf();
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) + std::lgamma(a + b) -
           std::lgamma(a) - std::lgamma(b);
}

double inv_gamma_logpdf(double x, double shape, double scale) {
    if (x <= 0.0) return neg_inf();
    return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double exponential_logpdf(double x, double mean) {
    if (x < 0.0 || mean <= 0.0) return neg_inf();
    return -std::log(mean) - x / mean;
}

double bernoulli_logpmf(int k, double p) {
    if (k == 1) return p > 0.0 ? std::log(p) : neg_inf();
    return p < 1.0 ? std::log1p(-p) : neg_inf();
}

double chi2_1_sf(double x) {
    if (x <= 0.0) return 1.0;
    return std::erfc(std::sqrt(0.5 * x));
}

double log_sum_exp(const std::vector<double>& logs) {
    if (logs.empty()) return neg_inf();
    const double m = *std::max_element(logs.begin(), logs.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double l : logs) s += std::exp(l - m);
    return m + std::log(s);
}

double log_mean_exp(const std::vector<double>& logs) {
    return log_sum_exp(logs) - std::log(static_cast<double>(logs.size()));
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

SampleMoments sample_moments(const std::vector<double>& v) {
    SampleMoments out;
    const auto n = static_cast<double>(v.size());
    out.mean = mean(v);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = x - out.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    out.variance = m2;
    if (m2 <= 0.0) {
        out.degenerate = true;  // skew/kurt undefined; reported as 0 with flag
        return out;
    }
    out.skewness = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2);
    return out;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw InputError("quantile: empty sample");
    std::sort(v.begin(), v.end());
    const double h = q * (static_cast<double>(v.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double w = h - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

double batch_means_se(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 4) return std::sqrt(variance(v) / static_cast<double>(n));
    const auto nb = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const std::size_t bs = n / nb;
    std::vector<double> bm;
    bm.reserve(nb);
    for (std::size_t i = 0; i + bs <= n; i += bs) {
        double s = 0.0;
        for (std::size_t j = i; j < i + bs; ++j) s += v[j];
        bm.push_back(s / static_cast<double>(bs));
    }
    const double vb = variance(bm);
    return std::sqrt(vb / static_cast<double>(bm.size()));
}

double ks_test_pvalue(std::vector<double> sample, double (*cdf)(double, const void*),
                      const void* ctx) {
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i], ctx);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace hsv
