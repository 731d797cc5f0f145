#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hsv/data.hpp"

namespace hsv {

// One trading day of intraday log prices on a fixed grid (M+1 prices,
// M returns). Timestamps must already be aligned; gaps are rejected upstream.
struct IntradayDay {
    std::string date;
    std::vector<double> log_prices;

    std::size_t num_returns() const { return log_prices.empty() ? 0 : log_prices.size() - 1; }
    double open() const { return log_prices.front(); }
    double close() const { return log_prices.back(); }
    std::vector<double> returns() const;
    void validate() const;  // ordered grid is the caller's contract; checks M >= 3, finite
};

struct DailyMeasures {
    std::string date;
    double r = 0.0;    // annualized open-to-close return
    double rv = 0.0;   // annualized realized variance
    double bv = 0.0;   // annualized bipower variation
    double tq = 0.0;   // annualized tri-power quarticity
    double z_rj = 0.0;
    int dnp = 0;
    std::optional<double> zp;  // defined only when dnp == 1
};

// Jump-robust spread constants of the ratio statistic.
inline constexpr double kVbb = (M_PI / 2.0) * (M_PI / 2.0) + M_PI - 3.0;
inline constexpr double kVqq = 2.0;

double realized_variance(const std::vector<double>& returns);
double bipower_variation(const std::vector<double>& returns);
double tripower_quarticity(const std::vector<double>& returns);
double mu_power(double p);  // E|N(0,1)|^p

// Ratio jump statistic; asymptotically N(0,1) under no jumps.
double relative_jump_stat(double rv, double bv, double tq, std::size_t m);

struct JumpExtraction {
    int dnp = 0;
    std::optional<double> zp;
};
JumpExtraction extract_jump(double rv, double bv, double z_rj, double daily_return, double alpha);

struct BuildReport {
    double dnp_mean = 0.0;      // sample mean of the jump indicator
    std::size_t imputed_bv = 0; // zero-BV days replaced by the sample minimum positive BV
};

ObservedData build_dataset(const std::vector<IntradayDay>& days, double alpha,
                           double annualization = 252.0, BuildReport* report = nullptr);

// Per-day measures without the cross-day BV imputation (testing convenience).
DailyMeasures compute_day_measures(const IntradayDay& day, double alpha, double annualization);

IntradayDay read_intraday_csv(const std::string& path);
void write_intraday_csv(const std::string& path, const IntradayDay& day);

}  // namespace hsv
