#include <cmath>

#include "doctest.h"
#include "hsv/diagnostics.hpp"
#include "hsv/rng.hpp"
#include "hsv/stats.hpp"

using namespace hsv;

TEST_CASE("inefficiency factor: iid draws near 1") {
    Rng rng(1);
    std::vector<double> x(100000);
    for (auto& v : x) v = rng.normal();
    const double f = inefficiency_factor(x);
    CHECK(f > 0.8);
    CHECK(f < 1.2);
}

TEST_CASE("inefficiency factor: AR(1) with coefficient 0.9 near (1+rho)/(1-rho)") {
    Rng rng(2);
    const std::size_t n = 1000000;
    std::vector<double> x(n);
    double prev = 0.0;
    const double rho = 0.9, innov = std::sqrt(1.0 - rho * rho);
    for (auto& v : x) {
        prev = rho * prev + innov * rng.normal();
        v = prev;
    }
    // Wide explicit bandwidth so the truncated window captures the slow decay;
    // the default bandwidth targets the near-iid chains we store.
    const double f = inefficiency_factor(x, 300.0);
    CHECK(f == doctest::Approx(19.0).epsilon(0.20));
}

TEST_CASE("inefficiency factor: constant series defined as 0") {
    CHECK(inefficiency_factor(std::vector<double>(100, 3.14)) == 0.0);
}

TEST_CASE("hpd interval: symmetric sample, constant sample, uniform width") {
    Rng rng(3);
    std::vector<double> x(200000);
    for (auto& v : x) v = rng.normal();
    const auto [lo, hi] = hpd_interval(x, 0.95);
    // Symmetric unimodal: HPD approximately equal-tailed.
    CHECK(lo == doctest::Approx(-1.96).epsilon(0.03));
    CHECK(hi == doctest::Approx(1.96).epsilon(0.03));

    const auto [clo, chi] = hpd_interval(std::vector<double>(50, 2.5), 0.5);
    CHECK(clo == 2.5);
    CHECK(chi == 2.5);

    std::vector<double> u(100000);
    for (auto& v : u) v = rng.uniform();
    const auto [ulo, uhi] = hpd_interval(u, 0.95);
    CHECK(uhi - ulo == doctest::Approx(0.95).epsilon(0.01));
}

TEST_CASE("cusum path: ends at zero, scale invariant shape") {
    Rng rng(4);
    std::vector<double> x(5000);
    for (auto& v : x) v = 2.0 + 0.5 * rng.normal();
    const auto cs = cusum_path(x);
    REQUIRE(cs.size() == x.size());
    CHECK(cs.back() == doctest::Approx(0.0).epsilon(1e-10));
    std::vector<double> y(x);
    for (auto& v : y) v = 10.0 + 3.0 * v;
    const auto cs2 = cusum_path(y);
    for (std::size_t i = 0; i < cs.size(); i += 500)
        CHECK(cs2[i] == doctest::Approx(cs[i]).epsilon(1e-8));
}
