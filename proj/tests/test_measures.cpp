#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "hsv/common.hpp"
#include "hsv/measures.hpp"
#include "hsv/rng.hpp"
#include "hsv/stats.hpp"

using namespace hsv;

namespace {

// Constant-variance diffusion grid: M returns with per-step variance var/M.
std::vector<double> diffusion_returns(Rng& rng, double day_variance, std::size_t m) {
    std::vector<double> r(m);
    const double sd = std::sqrt(day_variance / static_cast<double>(m));
    for (auto& x : r) x = sd * rng.normal();
    return r;
}

}  // namespace

TEST_CASE("realized variance: hand fixtures exact") {
    CHECK(realized_variance({0.01, -0.02, 0.005}) == doctest::Approx(0.000525).epsilon(1e-12));
    CHECK(realized_variance({0.0, 0.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(realized_variance({}), InputError);
}

TEST_CASE("bipower variation: hand fixtures exact") {
    CHECK(bipower_variation({0.01, -0.02}) ==
          doctest::Approx((M_PI / 2.0) * 2.0e-4).epsilon(1e-12));
    CHECK(bipower_variation({0.0, 0.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(bipower_variation({0.01}), InputError);
}

TEST_CASE("tri-power quarticity: hand fixtures exact") {
    CHECK(tripower_quarticity({0.0, 0.0, 0.0}) == 0.0);
    const double mu43 = std::pow(2.0, 2.0 / 3.0) * std::tgamma(7.0 / 6.0) / std::tgamma(0.5);
    const double expected = 3.0 / (mu43 * mu43 * mu43) * std::pow(0.01, 4.0);
    CHECK(tripower_quarticity({0.01, 0.01, 0.01}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(tripower_quarticity({0.01, 0.01}), InputError);
}

TEST_CASE("relative jump statistic: zero at rv == bv, hand value, errors") {
    CHECK(relative_jump_stat(0.02, 0.02, 0.001, 78) == 0.0);
    // Hand arithmetic with v_bb = (pi/2)^2 + pi - 3, v_qq = 2.
    const double vbb = (M_PI / 2.0) * (M_PI / 2.0) + M_PI - 3.0;
    const double rj = (0.02 - 0.015) / 0.02;
    const double denom = std::sqrt((vbb - 2.0) / 78.0 * std::max(1.0, 0.0005 / (0.015 * 0.015)));
    const double expected = rj / denom;
    CHECK(expected == doctest::Approx(1.898).epsilon(2e-3));  // magnitude anchor
    CHECK(relative_jump_stat(0.02, 0.015, 0.0005, 78) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(relative_jump_stat(0.0, 0.015, 0.0005, 78), InputError);
    CHECK_THROWS_AS(relative_jump_stat(0.02, 0.0, 0.0005, 78), InputError);
}

TEST_CASE("jump extraction rules") {
    // Below threshold: no jump, size absent.
    JumpExtraction j0 = extract_jump(0.02, 0.015, 1.0, 0.5, 0.001);
    CHECK(j0.dnp == 0);
    CHECK_FALSE(j0.zp.has_value());
    // Negative return day: size carries the sign of the return.
    JumpExtraction j1 = extract_jump(0.05, 0.01, 5.0, -0.3, 0.001);
    CHECK(j1.dnp == 1);
    CHECK(*j1.zp == doctest::Approx(-0.2).epsilon(1e-12));
    // rv < bv: clamp gives size zero even though the test fired.
    JumpExtraction j2 = extract_jump(0.01, 0.02, 5.0, 0.3, 0.001);
    CHECK(j2.dnp == 1);
    CHECK(*j2.zp == 0.0);
    // Monotone in z_rj: raising the statistic never flips 1 -> 0.
    const double thr = normal_inv_cdf(1.0 - 0.001);
    int prev = 0;
    for (double z = thr - 1.0; z < thr + 1.0; z += 0.01) {
        const int d = extract_jump(0.02, 0.015, z, 0.1, 0.001).dnp;
        CHECK(d >= prev);
        prev = d;
    }
}

TEST_CASE("scale equivariance: c^2 on RV/BV, c^4 on TQ") {
    std::vector<double> r = {0.01, -0.02, 0.005, 0.013, -0.007};
    std::vector<double> r2(r);
    const double c = 3.7;
    for (auto& x : r2) x *= c;
    CHECK(realized_variance(r2) == doctest::Approx(c * c * realized_variance(r)).epsilon(1e-12));
    CHECK(bipower_variation(r2) == doctest::Approx(c * c * bipower_variation(r)).epsilon(1e-12));
    CHECK(tripower_quarticity(r2) ==
          doctest::Approx(c * c * c * c * tripower_quarticity(r)).epsilon(1e-11));
}

TEST_CASE("fine-grid diffusion: RV and TQ near their integrated targets") {
    Rng rng(101);
    const double day_var = 0.01 / 252.0;
    const std::size_t m = 10000;
    const auto r = diffusion_returns(rng, day_var, m);
    CHECK(realized_variance(r) == doctest::Approx(day_var).epsilon(0.02));
    CHECK(bipower_variation(r) == doctest::Approx(day_var).epsilon(0.03));
    // Integrated quarticity of a constant-variance day is V^2.
    CHECK(tripower_quarticity(r) == doctest::Approx(day_var * day_var).epsilon(0.06));
}

TEST_CASE("BV is jump robust, RV picks up the jump") {
    Rng rng(202);
    const double day_var = 0.01 / 252.0;
    const std::size_t m = 20000;
    auto r = diffusion_returns(rng, day_var, m);
    const double rv_clean = realized_variance(r);
    const double jump = 0.02;
    r[m / 2] += jump;
    const double rv_jump = realized_variance(r);
    const double bv_jump = bipower_variation(r);
    CHECK(rv_jump - rv_clean == doctest::Approx(jump * jump).epsilon(0.02));
    CHECK(bv_jump == doctest::Approx(day_var).epsilon(0.05));
}

TEST_CASE("jump test size is near alpha on jump-free days (small-n smoke)") {
    Rng rng(303);
    const double alpha = 0.01;
    const std::size_t m = 500, n_days = 20000;
    std::size_t rejections = 0;
    for (std::size_t d = 0; d < n_days; ++d) {
        const auto r = diffusion_returns(rng, 0.01 / 252.0, m);
        const double z =
            relative_jump_stat(realized_variance(r), bipower_variation(r),
                               tripower_quarticity(r), m);
        if (z > normal_inv_cdf(1.0 - alpha)) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / n_days;
    const double se = std::sqrt(alpha * (1.0 - alpha) / n_days);
    CHECK(std::abs(rate - alpha) < 4.0 * se);
}

TEST_CASE("build_dataset: two-day toy matches hand arithmetic") {
    IntradayDay d1{"day1", {0.0, 0.01, -0.01, 0.005, 0.005}};
    IntradayDay d2{"day2", {0.005, 0.015, 0.005, 0.0, 0.02}};
    BuildReport rep;
    ObservedData data = build_dataset({d1, d2}, 0.001, 252.0, &rep);
    REQUIRE(data.size() == 2);
    // r = 252 * (close - open)
    CHECK(data.r[0] == doctest::Approx(252.0 * 0.005).epsilon(1e-12));
    CHECK(data.r[1] == doctest::Approx(252.0 * 0.015).epsilon(1e-12));
    // BV annualized by 252, stored in logs.
    const auto rets1 = d1.returns();
    CHECK(data.lnbv[0] ==
          doctest::Approx(std::log(252.0 * bipower_variation(rets1))).epsilon(1e-12));
    CHECK(rep.imputed_bv == 0);
}

TEST_CASE("build_dataset: flat day triggers imputation and no jump") {
    IntradayDay flat{"flat", {0.01, 0.01, 0.01, 0.01}};
    IntradayDay live{"live", {0.0, 0.002, -0.001, 0.003}};
    BuildReport rep;
    ObservedData data = build_dataset({flat, live}, 0.001, 252.0, &rep);
    CHECK(data.r[0] == 0.0);
    CHECK(data.dnp[0] == 0);
    CHECK(rep.imputed_bv == 1);
    CHECK(std::isfinite(data.lnbv[0]));
    // Imputed with the other day's (positive) BV.
    CHECK(data.lnbv[0] == doctest::Approx(data.lnbv[1]).epsilon(1e-12));

    // All-flat sample still yields finite logs via the floor fallback.
    ObservedData flat_only = build_dataset({flat}, 0.001, 252.0, nullptr);
    CHECK(std::isfinite(flat_only.lnbv[0]));
}

TEST_CASE("build_dataset: permuting days permutes rows") {
    Rng rng(404);
    std::vector<IntradayDay> days;
    for (int i = 0; i < 4; ++i) {
        IntradayDay d;
        d.date = "d" + std::to_string(i);
        d.log_prices.push_back(0.0);
        for (int k = 0; k < 30; ++k)
            d.log_prices.push_back(d.log_prices.back() + 0.003 * rng.normal());
        days.push_back(d);
    }
    ObservedData a = build_dataset(days, 0.001);
    std::swap(days[0], days[3]);
    ObservedData b = build_dataset(days, 0.001);
    CHECK(a.r[0] == b.r[3]);
    CHECK(a.lnbv[0] == b.lnbv[3]);
    CHECK(a.dnp[0] == b.dnp[3]);
    CHECK(a.r[1] == b.r[1]);
}

TEST_CASE("intraday csv round trip and gap rejection") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "hsv_measures_test";
    fs::create_directories(dir);
    IntradayDay day{"2020-01-02", {4.60, 4.61, 4.605, 4.62}};
    const std::string path = (dir / "2020-01-02.csv").string();
    write_intraday_csv(path, day);
    IntradayDay back = read_intraday_csv(path);
    CHECK(back.date == "2020-01-02");
    REQUIRE(back.log_prices.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(back.log_prices[i] == doctest::Approx(day.log_prices[i]).epsilon(1e-12));

    const std::string gap_path = (dir / "gap.csv").string();
    {
        FILE* f = std::fopen(gap_path.c_str(), "w");
        std::fputs("timestamp,price\n0,100\n1,101\n3,102\n4,103\n", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(read_intraday_csv(gap_path), InputError);
}
