#include "hsv/measures.hpp"

#include <algorithm>
#include <cmath>

#include "hsv/common.hpp"
#include "hsv/csv.hpp"
#include "hsv/stats.hpp"

namespace hsv {

std::vector<double> IntradayDay::returns() const {
    std::vector<double> r(num_returns());
    for (std::size_t i = 0; i + 1 < log_prices.size(); ++i) r[i] = log_prices[i + 1] - log_prices[i];
    return r;
}

void IntradayDay::validate() const {
    if (num_returns() < 3)
        throw InputError("day " + date + ": need at least 4 grid prices (3 returns)");
    if (!all_finite(log_prices)) throw InputError("day " + date + ": non-finite log price");
}

double realized_variance(const std::vector<double>& returns) {
    if (returns.empty()) throw InputError("insufficient intraday returns");
    double s = 0.0;
    for (double r : returns) s += r * r;
    return s;
}

double bipower_variation(const std::vector<double>& returns) {
    if (returns.size() < 2) throw InputError("bipower variation needs at least 2 returns");
    double s = 0.0;
    for (std::size_t i = 1; i < returns.size(); ++i)
        s += std::abs(returns[i]) * std::abs(returns[i - 1]);
    return (M_PI / 2.0) * s;
}

double mu_power(double p) {
    // E|N(0,1)|^p = 2^(p/2) Gamma((p+1)/2) / Gamma(1/2)
    return std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (p + 1.0)) / std::tgamma(0.5);
}

double tripower_quarticity(const std::vector<double>& returns) {
    if (returns.size() < 3) throw InputError("tri-power quarticity needs at least 3 returns");
    static const double mu43 = mu_power(4.0 / 3.0);
    const double scale = static_cast<double>(returns.size()) / (mu43 * mu43 * mu43);
    double s = 0.0;
    for (std::size_t i = 2; i < returns.size(); ++i)
        s += std::pow(std::abs(returns[i]) * std::abs(returns[i - 1]) * std::abs(returns[i - 2]),
                      4.0 / 3.0);
    return scale * s;
}

double relative_jump_stat(double rv, double bv, double tq, std::size_t m) {
    if (rv <= 0.0 || bv <= 0.0) throw InputError("degenerate day");
    if (m < 3) throw InputError("relative_jump_stat needs M >= 3");
    const double rj = (rv - bv) / rv;
    const double quart = std::max(1.0, tq / (bv * bv));
    const double denom = std::sqrt((kVbb - kVqq) / static_cast<double>(m) * quart);
    return rj / denom;
}

JumpExtraction extract_jump(double rv, double bv, double z_rj, double daily_return, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must be in (0,1)");
    JumpExtraction out;
    if (z_rj > normal_inv_cdf(1.0 - alpha)) {
        out.dnp = 1;
        const double mag = std::sqrt(std::max(rv - bv, 0.0));
        out.zp = (daily_return < 0.0 ? -mag : mag);
    }
    return out;
}

DailyMeasures compute_day_measures(const IntradayDay& day, double alpha, double annualization) {
    day.validate();
    const std::vector<double> rets = day.returns();
    DailyMeasures m;
    m.date = day.date;
    m.r = annualization * (day.close() - day.open());
    const double rv_d = realized_variance(rets);
    const double bv_d = bipower_variation(rets);
    const double tq_d = tripower_quarticity(rets);
    m.rv = annualization * rv_d;
    m.bv = annualization * bv_d;
    m.tq = annualization * annualization * tq_d;
    if (rv_d > 0.0 && bv_d > 0.0) {
        // Scale-free: identical whether raw or annualized measures are used.
        m.z_rj = relative_jump_stat(rv_d, bv_d, tq_d, rets.size());
        const JumpExtraction j = extract_jump(m.rv, m.bv, m.z_rj, m.r, alpha);
        m.dnp = j.dnp;
        m.zp = j.zp;
    }
    return m;
}

ObservedData build_dataset(const std::vector<IntradayDay>& days, double alpha,
                           double annualization, BuildReport* report) {
    if (days.empty()) throw InputError("no input days");
    std::vector<DailyMeasures> rows;
    rows.reserve(days.size());
    for (const auto& day : days) rows.push_back(compute_day_measures(day, alpha, annualization));

    // ln BV must be finite; replace zero-BV days by the smallest positive BV
    // in the sample (floor fallback when every day is flat).
    double min_pos_bv = std::numeric_limits<double>::infinity();
    for (const auto& m : rows)
        if (m.bv > 0.0) min_pos_bv = std::min(min_pos_bv, m.bv);
    if (!std::isfinite(min_pos_bv)) min_pos_bv = 1e-12;

    ObservedData data;
    std::size_t imputed = 0;
    double dnp_sum = 0.0;
    for (const auto& m : rows) {
        double bv = m.bv;
        if (bv <= 0.0) {
            bv = min_pos_bv;
            ++imputed;
        }
        data.dates.push_back(m.date);
        data.r.push_back(m.r);
        data.lnbv.push_back(std::log(bv));
        data.dnp.push_back(m.dnp);
        data.zp.push_back(m.dnp == 1 ? *m.zp : 0.0);
        dnp_sum += m.dnp;
    }
    if (report) {
        report->dnp_mean = dnp_sum / static_cast<double>(rows.size());
        report->imputed_bv = imputed;
    }
    data.validate();
    return data;
}

IntradayDay read_intraday_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const int ct = t.column("timestamp"), cp = t.column("price");
    if (ct < 0 || cp < 0) throw InputError(path + ": expected header timestamp,price");
    IntradayDay day;
    // date = file stem
    auto slash = path.find_last_of('/');
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
    day.date = stem;

    std::vector<double> ts;
    for (const auto& row : t.rows) {
        ts.push_back(parse_double(row[ct]));
        const double price = parse_double(row[cp]);
        if (!(price > 0.0)) throw InputError(path + ": non-positive price");
        day.log_prices.push_back(std::log(price));
    }
    if (ts.size() < 4) throw InputError(path + ": need at least 4 grid points");
    const double step = ts[1] - ts[0];
    if (!(step > 0.0)) throw InputError(path + ": timestamps not increasing");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double d = ts[i] - ts[i - 1];
        if (!(d > 0.0)) throw InputError(path + ": timestamps not increasing");
        if (std::abs(d - step) > 1e-6 * std::max(1.0, std::abs(step)))
            throw InputError(path + ": gap in intraday grid (pre-aligned grid required)");
    }
    return day;
}

void write_intraday_csv(const std::string& path, const IntradayDay& day) {
    CsvTable t;
    t.header = {"timestamp", "price"};
    for (std::size_t i = 0; i < day.log_prices.size(); ++i)
        t.rows.push_back({std::to_string(i), format_double(std::exp(day.log_prices[i]))});
    write_csv(path, t);
}

}  // namespace hsv
