#pragma once

#include <cstddef>
#include <vector>

namespace hsv {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

double normal_pdf(double x);
double normal_cdf(double x);
double normal_logcdf(double x);
double normal_inv_cdf(double p);  // quantile of the standard normal

double normal_logpdf(double x, double mean, double sd);

// N(mean, sd^2) truncated to (0, inf), normalizer included.
double truncated_normal_logpdf(double x, double mean, double sd);

double beta_logpdf(double x, double a, double b);
double inv_gamma_logpdf(double x, double shape, double scale);
double exponential_logpdf(double x, double mean);
double bernoulli_logpmf(int k, double p);

double chi2_1_sf(double x);  // P(Chi2_1 > x)

double log_sum_exp(const std::vector<double>& logs);
double log_mean_exp(const std::vector<double>& logs);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // population (divide by n)

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  // divide-by-n
    double skewness = 0.0;
    double kurtosis = 0.0;  // non-excess
    bool degenerate = false;
};
SampleMoments sample_moments(const std::vector<double>& v);

// q-quantile of a copy-sorted sample, linear interpolation.
double quantile(std::vector<double> v, double q);

// Standard error of the mean of a (possibly autocorrelated) series via batch
// means with ~sqrt(n) batches.
double batch_means_se(const std::vector<double>& v);

// Two-sided Kolmogorov-Smirnov test of `sample` against a cdf given as a
// callable; returns the asymptotic p-value.
double ks_test_pvalue(std::vector<double> sample, double (*cdf)(double, const void*),
                      const void* ctx);

}  // namespace hsv
