#include <cmath>

#include "doctest.h"
#include "hsv/common.hpp"
#include "hsv/diagnostics.hpp"
#include "hsv/sampler.hpp"
#include "hsv/simulate.hpp"
#include "hsv/stats.hpp"

using namespace hsv;

namespace {

ModelParams table_params(Variant v = Variant::M2) {
    ModelParams p;
    p.variant = v;
    p.mu = 0.179;
    p.gamma = -7.683;
    p.mu_p = 0.353;
    p.gamma_p = -13.43;
    p.sigma_p = 1.773;
    p.sigma_bv = 0.468;
    p.kappa = 0.101;
    p.theta = 0.0078;
    p.sigma_v = 0.016;
    p.rho = -0.328;
    p.delta0_p = 0.104;
    p.alpha_p = 0.095;
    p.beta_pp = 0.059;
    p.delta0_v = 0.058;
    p.alpha_v = 0.041;
    p.beta_vv = 0.032;
    p.beta_vp = (v == Variant::MF || v == Variant::M1) ? 4.79e-4 : 0.0;
    p.beta_vp_neg = (v == Variant::MF) ? 1.04e-3 : 0.0;
    p.mu_v = 0.021;
    return p;
}

ObservedData sim_data(std::size_t days, Variant v, std::uint64_t seed) {
    SimConfig cfg;
    cfg.days = days;
    cfg.seed = seed;
    cfg.params = table_params(v);
    return simulate(cfg).data;
}

double full_logpost(Sampler& s) {
    s.invalidate_target();
    return s.log_target();
}

}  // namespace

TEST_CASE("block-local target differences equal full posterior differences") {
    for (Variant v : {Variant::M2, Variant::MF, Variant::M6}) {
        CAPTURE(variant_name(v));
        ObservedData data = sim_data(60, v, 41);
        ChainConfig cfg;
        Sampler s(data, table_params(v), PriorConfig{}, cfg);
        Rng rng(7);
        // Randomize latents a little so nothing is at a special point.
        for (std::size_t t = 1; t < data.size(); ++t) {
            s.mutable_latents().v[t] *= std::exp(0.2 * rng.normal());
            if (s.params().free_dnv()) s.mutable_latents().dnv[t] = rng.bernoulli(0.3);
        }
        s.refresh_derived_state();

        const std::size_t a = 10, b = 24;
        const double full_before = full_logpost(s);
        const double local_before = SamplerTestAccess::block_local_target(s, a, b);
        for (std::size_t t = a; t <= b; ++t)
            s.mutable_latents().v[t] *= std::exp(0.3 * rng.normal());
        s.refresh_derived_state();
        const double full_after = full_logpost(s);
        const double local_after = SamplerTestAccess::block_local_target(s, a, b);
        CHECK(full_after - full_before ==
              doctest::Approx(local_after - local_before).epsilon(1e-9));
    }
}

TEST_CASE("block proposal derivatives match finite differences") {
    for (Variant v : {Variant::M2, Variant::MF}) {
        CAPTURE(variant_name(v));
        ObservedData data = sim_data(50, v, 42);
        ChainConfig cfg;
        Sampler s(data, table_params(v), PriorConfig{}, cfg);
        Rng rng(8);
        for (std::size_t t = 1; t < data.size(); ++t)
            s.mutable_latents().v[t] *= std::exp(0.15 * rng.normal());
        s.refresh_derived_state();
        const auto [gerr, herr] = SamplerTestAccess::block_derivative_errors(s, 5, 14);
        CHECK(gerr < 5e-5);
        CHECK(herr < 5e-3);
    }
}

TEST_CASE("dnv site log-difference equals full posterior difference") {
    for (Variant v : {Variant::M2, Variant::MF, Variant::M6, Variant::M5}) {
        CAPTURE(variant_name(v));
        ObservedData data = sim_data(80, v, 43);
        ChainConfig cfg;
        cfg.dnv_horizon = 0;  // exact
        ModelParams p = table_params(v);
        if (v == Variant::M5) {
            p.alpha_p = 0.5 * p.delta0_p / p.v_bar();
            p.alpha_v = 0.5 * p.delta0_v / p.v_bar();
        }
        Sampler s(data, p, PriorConfig{}, cfg);
        Rng rng(9);
        for (std::size_t t = 1; t < data.size(); ++t) {
            s.mutable_latents().dnv[t] = rng.bernoulli(0.25);
            s.mutable_latents().zv[t] = rng.exponential(p.mu_v);
        }
        s.refresh_derived_state();

        for (std::size_t t : {std::size_t{5}, std::size_t{40}, data.size() - 1}) {
            const int cand = 1 - s.latents().dnv[t];
            const double fast = SamplerTestAccess::dnv_site_logdiff(s, t, cand);
            const double before = full_logpost(s);
            s.mutable_latents().dnv[t] = cand;
            s.refresh_derived_state();
            const double after = full_logpost(s);
            s.mutable_latents().dnv[t] = 1 - cand;
            s.refresh_derived_state();
            CHECK(fast == doctest::Approx(after - before).epsilon(1e-8));
        }
    }
}

TEST_CASE("T=3 toy: dnv Gibbs frequencies match exhaustive enumeration") {
    ObservedData data = sim_data(3, Variant::M2, 44);
    ChainConfig cfg;
    cfg.dnv_horizon = 0;
    ModelParams p = table_params(Variant::M2);
    Sampler s(data, p, PriorConfig{}, cfg);
    // Freeze V and Zv at fixed values; only dnv moves.
    Rng init(10);
    for (std::size_t t = 1; t < 3; ++t) {
        s.mutable_latents().v[t] = 0.006 + 0.004 * init.uniform();
        s.mutable_latents().zv[t] = 0.01 + 0.01 * init.uniform();
    }
    s.mutable_latents().zv[0] = 0.015;
    s.refresh_derived_state();

    // Exact joint over the 4 free configurations (dnv_1, dnv_2).
    double logw[2][2];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            s.mutable_latents().dnv[1] = i;
            s.mutable_latents().dnv[2] = j;
            s.refresh_derived_state();
            logw[i][j] = full_logpost(s);
        }
    }
    double z = 0.0;
    const double m = std::max({logw[0][0], logw[0][1], logw[1][0], logw[1][1]});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) z += std::exp(logw[i][j] - m);
    double expect[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) expect[i][j] = std::exp(logw[i][j] - m) / z;

    s.mutable_latents().dnv[1] = 0;
    s.mutable_latents().dnv[2] = 0;
    s.refresh_derived_state();
    Rng rng(11);
    const std::size_t sweeps = 200000;
    double count[2][2] = {{0, 0}, {0, 0}};
    std::vector<double> ind00;
    ind00.reserve(sweeps);
    for (std::size_t k = 0; k < sweeps; ++k) {
        s.sample_variance_jump_occurrences(rng);
        count[s.latents().dnv[1]][s.latents().dnv[2]] += 1.0;
        ind00.push_back(s.latents().dnv[1] == 0 && s.latents().dnv[2] == 0 ? 1.0 : 0.0);
    }
    const double se00 = batch_means_se(ind00);
    CHECK(std::abs(count[0][0] / sweeps - expect[0][0]) < 3.0 * std::max(se00, 1e-4));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(count[i][j] / sweeps == doctest::Approx(expect[i][j]).epsilon(0.08));
}

TEST_CASE("dnv horizon truncation approximates the exact conditional") {
    ObservedData data = sim_data(400, Variant::M2, 45);
    ChainConfig exact_cfg;
    exact_cfg.dnv_horizon = 0;
    ChainConfig trunc_cfg;
    trunc_cfg.dnv_horizon = 150;
    Sampler se(data, table_params(Variant::M2), PriorConfig{}, exact_cfg);
    Sampler st(data, table_params(Variant::M2), PriorConfig{}, trunc_cfg);
    const double a = SamplerTestAccess::dnv_site_logdiff(se, 200, 1);
    const double b = SamplerTestAccess::dnv_site_logdiff(st, 200, 1);
    CHECK(a == doctest::Approx(b).epsilon(0.01));
}

TEST_CASE("zv draws: prior when off, concentration when pinned by the transition") {
    ObservedData data = sim_data(120, Variant::M2, 46);
    ChainConfig cfg;
    ModelParams p = table_params(Variant::M2);

    SUBCASE("dnv = 0 sites are fresh prior draws with mean mu_v") {
        Sampler s(data, p, PriorConfig{}, cfg);
        for (std::size_t t = 1; t < data.size(); ++t) s.mutable_latents().dnv[t] = 0;
        s.refresh_derived_state();
        Rng rng(12);
        double acc = 0.0;
        std::size_t n = 0;
        for (int sweep = 0; sweep < 400; ++sweep) {
            s.sample_variance_jump_sizes(rng);
            for (std::size_t t = 0; t < data.size(); ++t) {
                if (s.latents().dnv[t] == 0) {
                    acc += s.latents().zv[t];
                    ++n;
                }
            }
        }
        CHECK(acc / static_cast<double>(n) == doctest::Approx(p.mu_v).epsilon(0.02));
    }

    SUBCASE("small sigma_v pins the jump size to the variance increment") {
        ModelParams q = p;
        q.sigma_v = 2e-4;  // Feller still fine
        Sampler s(data, q, PriorConfig{}, cfg);
        const std::size_t t = 50;
        s.mutable_latents().dnv[t] = 1;
        // Build a visible jump into the stored path.
        s.mutable_latents().v[t + 1] = s.latents().v[t] + 0.03;
        s.refresh_derived_state();
        Rng rng(13);
        s.sample_variance_jump_sizes(rng);
        const double jump = s.latents().zv[t];
        const double drift = q.kappa * q.theta + (1.0 - q.kappa) * s.latents().v[t] +
                             q.psi() * (data.r[t] - data.zp[t] * data.dnp[t] - q.mu -
                                        q.gamma * s.latents().v[t]);
        CHECK(jump == doctest::Approx(s.latents().v[t + 1] - drift).epsilon(0.01));
        CHECK(jump >= 0.0);
    }
}

TEST_CASE("near-observed-volatility limit: posterior V tracks exp(lnbv)") {
    ModelParams p = table_params(Variant::M2);
    p.sigma_bv = 1e-4;
    SimConfig scfg;
    scfg.days = 60;
    scfg.seed = 47;
    scfg.params = p;
    ObservedData data = simulate(scfg).data;

    ChainConfig cfg;
    Sampler s(data, p, PriorConfig{}, cfg);
    Rng rng(14);
    // Latent-only chain at fixed parameters.
    std::vector<std::vector<double>> vs;
    for (int sweep = 0; sweep < 600; ++sweep) {
        s.sample_volatility(rng);
        s.sample_variance_jump_occurrences(rng);
        s.sample_variance_jump_sizes(rng);
        if (sweep >= 200) vs.push_back(s.latents().v);
    }
    for (std::size_t t = 5; t < data.size(); t += 7) {
        std::vector<double> col;
        col.reserve(vs.size());
        for (const auto& row : vs) col.push_back(row[t]);
        const double m = mean(col);
        const double sd = std::sqrt(variance(col));
        const double target = std::exp(data.lnbv[t]);
        CHECK(std::abs(m - target) < std::max(3.0 * sd, 1e-4 * target));
    }
}

TEST_CASE("T=3 detailed-balance smoke test: V matches 2D quadrature") {
    ModelParams p = table_params(Variant::M7);  // no jumps: V_2, V_3 free
    SimConfig scfg;
    scfg.days = 3;
    scfg.seed = 48;
    scfg.params = p;
    ObservedData data = simulate(scfg).data;

    ChainConfig cfg;
    cfg.v_block_size = 2;
    Sampler s(data, p, PriorConfig{}, cfg);

    // Quadrature of the exact conditional posterior of (V_2, V_3).
    const int n = 220;
    const double v_lo = 1e-4, v_hi = 0.12;
    const double h = (v_hi - v_lo) / n;
    double z = 0.0, ev2 = 0.0, ev3 = 0.0;
    double max_log = neg_inf();
    std::vector<std::vector<double>> logw(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            s.mutable_latents().v[1] = v_lo + (i + 0.5) * h;
            s.mutable_latents().v[2] = v_lo + (j + 0.5) * h;
            s.invalidate_target();
            logw[i][j] = s.log_target();
            max_log = std::max(max_log, logw[i][j]);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double w = std::exp(logw[i][j] - max_log);
            z += w;
            ev2 += w * (v_lo + (i + 0.5) * h);
            ev3 += w * (v_lo + (j + 0.5) * h);
        }
    }
    ev2 /= z;
    ev3 /= z;

    s.mutable_latents().v[1] = 0.01;
    s.mutable_latents().v[2] = 0.01;
    s.invalidate_target();
    Rng rng(15);
    s.set_tuning(true);
    for (int k = 0; k < 2000; ++k) s.sample_volatility(rng);
    s.set_tuning(false);
    std::vector<double> v2s, v3s;
    for (int k = 0; k < 60000; ++k) {
        s.sample_volatility(rng);
        v2s.push_back(s.latents().v[1]);
        v3s.push_back(s.latents().v[2]);
    }
    CHECK(std::abs(mean(v2s) - ev2) < std::max(4.0 * batch_means_se(v2s), 0.02 * ev2));
    CHECK(std::abs(mean(v3s) - ev3) < std::max(4.0 * batch_means_se(v3s), 0.02 * ev3));
}

TEST_CASE("prior recovery: likelihood off reproduces the priors") {
    ObservedData data = sim_data(40, Variant::M2, 49);
    ChainConfig cfg;
    cfg.likelihood_scale = 0.0;
    Sampler s(data, table_params(Variant::M2), PriorConfig{}, cfg);
    Rng rng(16);
    s.set_tuning(true);
    for (int k = 0; k < 2000; ++k) s.sweep(rng);
    s.set_tuning(false);

    std::vector<double> d0p, mu, muv;
    for (int k = 0; k < 30000; ++k) {
        s.sweep(rng);
        if (k % 2 == 0) {
            d0p.push_back(s.params().delta0_p);
            mu.push_back(s.params().mu);
            muv.push_back(s.params().mu_v);
        }
    }
    struct BetaCtx {
        double a, b;
    };
    // KS test of delta0_p against Beta(10, 90) via its cdf (numeric).
    static std::vector<double> grid, cdf;
    grid.clear();
    cdf.clear();
    const int gn = 4000;
    double acc = 0.0;
    for (int i = 0; i < gn; ++i) {
        const double x = (i + 0.5) / gn;
        acc += std::exp(beta_logpdf(x, 10.0, 90.0)) / gn;
        grid.push_back(x);
        cdf.push_back(acc);
    }
    auto beta_cdf = [](double x, const void*) -> double {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const auto idx = static_cast<std::size_t>(x * grid.size());
        return cdf[std::min(idx, cdf.size() - 1)];
    };
    const double pval = ks_test_pvalue(d0p, beta_cdf, nullptr);
    CHECK(pval > 0.01);

    // mu uniform on (-10, 10): moments.
    CHECK(mean(mu) == doctest::Approx(0.0).epsilon(0.5));
    CHECK(std::sqrt(variance(mu)) == doctest::Approx(20.0 / std::sqrt(12.0)).epsilon(0.1));
    // mu_v inverse gamma (shape 20, scale 1/7.2): mean 1/(7.2*19).
    CHECK(mean(muv) == doctest::Approx(1.0 / (7.2 * 19.0)).epsilon(0.1));
}

TEST_CASE("conjugate mu draw matches the hand conditional at fixed latents") {
    ObservedData data = sim_data(150, Variant::M7, 50);
    ChainConfig cfg;
    ModelParams p = table_params(Variant::M7);
    p.rho = 1e-9;  // no leverage rows
    p.gamma = -1e-9;
    Sampler s(data, p, PriorConfig{}, cfg);
    for (const auto& name : {"gamma", "kappa", "theta", "sigma_v", "rho", "sigma_bv"})
        s.pin(name);

    // Hand conditional: weighted mean of r_t with weights 1/V_t (gamma ~ 0,
    // leverage rows vanish at rho ~ 0).
    double sw = 0.0, swy = 0.0;
    for (std::size_t t = 0; t < data.size(); ++t) {
        const double v = s.latents().v[t];
        sw += 1.0 / v;
        swy += data.r[t] / v;
    }
    const double expect_mean = swy / sw;
    const double expect_sd = std::sqrt(1.0 / sw);

    Rng rng(17);
    std::vector<double> mus;
    for (int k = 0; k < 20000; ++k) {
        s.sample_static_params(rng);
        mus.push_back(s.params().mu);
    }
    CHECK(mean(mus) == doctest::Approx(expect_mean).epsilon(0.02));
    CHECK(std::sqrt(variance(mus)) == doctest::Approx(expect_sd).epsilon(0.05));
}

TEST_CASE("run_chain: determinism, invariants, variant structure") {
    ObservedData data = sim_data(120, Variant::M2, 51);
    PriorConfig prior;
    ChainConfig cfg;
    cfg.burn_in = 300;
    cfg.keep = 300;
    cfg.thin = 3;
    cfg.seed = 99;
    cfg.dnv_horizon = 80;

    ChainOutput a = run_chain(data, Variant::M2, prior, cfg);
    ChainOutput b = run_chain(data, Variant::M2, prior, cfg);
    REQUIRE(a.draws.size() == cfg.keep / cfg.thin);
    REQUIRE(a.draws.size() == b.draws.size());
    for (std::size_t i = 0; i < a.draws.size(); ++i)
        for (std::size_t j = 0; j < a.draws[i].size(); ++j)
            CHECK(a.draws[i][j] == b.draws[i][j]);

    // Every stored draw satisfies the parameter restrictions.
    for (const auto& row : a.draws) {
        ModelParams p = a.last_params;
        for (std::size_t j = 0; j < a.param_names.size(); ++j)
            p.set(a.param_names[j], row[j]);
        CHECK(p.valid());
    }

    // M7 never allocates jump latents.
    ObservedData d7 = sim_data(80, Variant::M7, 52);
    ChainOutput c = run_chain(d7, Variant::M7, prior, cfg);
    CHECK(c.param_names.size() == 7);
    for (int dnv : c.last_latents.dnv) CHECK(dnv == 0);
}
