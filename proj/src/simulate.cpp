#include "hsv/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "hsv/common.hpp"
#include "hsv/stats.hpp"

namespace hsv {

namespace {

constexpr int kTruncationRetryCap = 1000;

inline double clamp01(double d) {
    return std::clamp(d, kIntensityClamp, 1.0 - kIntensityClamp);
}

std::string day_label(std::size_t t) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "d%05zu", t + 1);
    return buf;
}

}  // namespace

void SimConfig::validate() const {
    if (days < 1) throw InputError("sim: days must be >= 1");
    if (intraday_steps != 0 && intraday_steps < 3)
        throw InputError("sim: intraday steps must be 0 or >= 3");
    if (emit_intraday && intraday_steps == 0)
        throw InputError("sim: emit_intraday requires intraday steps");
    if (const auto why = params.invalid_reason())
        throw InputError("sim: invalid parameters: " + *why);
}

SimResult simulate(const SimConfig& config) {
    config.validate();
    const ModelParams& p = config.params;
    const std::size_t T = config.days;
    Rng rng(config.seed);

    SimResult out;
    out.data.dates.reserve(T);
    out.data.r.reserve(T);

    const bool hawkes_p = p.hawkes_p();
    const bool hawkes_v = p.hawkes_v();
    double dinf_p = 0.0, dinf_v = 0.0;
    if (hawkes_p || hawkes_v) {
        const UnconditionalInversion inv = invert_unconditional(p);
        dinf_p = inv.delta_inf_p;
        dinf_v = inv.delta_inf_v;
    }

    double v = p.v_bar();
    double delta_p = 0.0, delta_v = 0.0;
    switch (p.variant) {
        case Variant::M7: break;
        case Variant::M6:
            delta_p = clamp01(p.delta0_p);
            delta_v = clamp01(p.delta0_v);
            break;
        case Variant::M5: break;  // set per day from V_t
        default:
            delta_p = clamp01(p.delta0_p);
            if (hawkes_v) delta_v = clamp01(p.delta0_v);
            break;
    }

    double log_price = std::log(100.0);  // intraday grid level, chained across days

    for (std::size_t t = 0; t < T; ++t) {
        if (p.variant == Variant::M5) {
            delta_p = clamp01(p.alpha_p0() + p.alpha_p * v);
            delta_v = clamp01(p.alpha_v0() + p.alpha_v * v);
        }

        const double xi_p = rng.normal();
        int dnp = 0;
        double zp = 0.0;
        if (p.models_price_jumps() && rng.bernoulli(delta_p)) {
            dnp = 1;
            zp = rng.normal(p.mu_p + p.gamma_p * v, p.sigma_p);
        }
        const double r = p.mu + p.gamma * v + std::sqrt(v) * xi_p + zp * dnp;
        const double lnbv = std::log(v) + p.sigma_bv * rng.normal();

        int dnv = 0;
        double zv = 0.0;
        if (p.models_variance_jumps()) {
            if (p.variant == Variant::M3)
                dnv = dnp;
            else if (t == 0)
                dnv = dnp;  // imposed initial condition
            else
                dnv = rng.bernoulli(delta_v) ? 1 : 0;
            zv = rng.exponential(p.mu_v);
        }

        out.data.dates.push_back(day_label(t));
        out.data.r.push_back(r);
        out.data.lnbv.push_back(lnbv);
        out.data.dnp.push_back(dnp);
        out.data.zp.push_back(zp);
        out.truth.dates.push_back(day_label(t));
        out.truth.v.push_back(v);
        out.truth.dnv.push_back(dnv);
        out.truth.zv.push_back(zv);
        out.truth.delta_p.push_back(delta_p);
        out.truth.delta_v.push_back(delta_v);

        if (config.emit_intraday) {
            const std::size_t m = config.intraday_steps;
            IntradayDay day;
            day.date = day_label(t);
            day.log_prices.reserve(m + 1);
            day.log_prices.push_back(log_price);
            const double step_sd = std::sqrt(v / (config.annualization * m));
            const std::size_t jump_at =
                dnp ? static_cast<std::size_t>(rng.uniform() * m) : m;  // m = never
            for (std::size_t i = 0; i < m; ++i) {
                double dr = step_sd * rng.normal();
                if (i == jump_at) dr += zp / std::sqrt(config.annualization);
                day.log_prices.push_back(day.log_prices.back() + dr);
            }
            log_price = day.log_prices.back();
            out.intraday.push_back(std::move(day));
        }

        // Advance the state to t+1.
        const double w = r - zp * dnp - p.mu - p.gamma * v;
        const double mean = p.kappa * p.theta + (1.0 - p.kappa) * v + p.psi() * w + zv * dnv;
        const double sd = std::sqrt(p.omega() * v);
        double v_next = 0.0;
        bool ok = false;
        for (int attempt = 0; attempt < kTruncationRetryCap; ++attempt) {
            v_next = mean + sd * rng.normal();
            if (v_next > 0.0) {
                ok = true;
                break;
            }
        }
        if (!ok)
            throw NumericError("simulate: variance positivity rejection cap exceeded at day " +
                               std::to_string(t + 1));

        if (hawkes_p) {
            delta_p = clamp01(p.alpha_p * dinf_p + (1.0 - p.alpha_p) * delta_p + p.beta_pp * dnp);
        }
        if (hawkes_v) {
            const int dnp_neg = (dnp == 1 && zp < 0.0) ? 1 : 0;
            delta_v = clamp01(p.alpha_v * dinf_v + (1.0 - p.alpha_v) * delta_v +
                              p.beta_vv * dnv + p.beta_vp * dnp + p.beta_vp_neg * dnp_neg);
        }
        v = v_next;
    }
    return out;
}

PredictiveDraw simulate_predictive_step(const ModelParams& p, const PredictiveStepState& s,
                                        Rng& rng) {
    PredictiveDraw d;
    const double jump_r = p.models_price_jumps() ? s.zp_t * s.dnp_t : 0.0;
    const double jump_v = p.models_variance_jumps() ? s.zv_t * s.dnv_t : 0.0;
    const double w = s.r_t - jump_r - p.mu - p.gamma * s.v_t;
    const double mean = p.kappa * p.theta + (1.0 - p.kappa) * s.v_t + p.psi() * w + jump_v;
    const double sd = std::sqrt(p.omega() * s.v_t);
    d.v_next = rng.truncated_normal_lower(mean, sd, 0.0);

    d.delta_p_next = s.delta_p_next;
    if (p.variant == Variant::M5) d.delta_p_next = clamp01(p.alpha_p0() + p.alpha_p * d.v_next);
    if (p.variant == Variant::M7) d.delta_p_next = 0.0;

    if (p.models_price_jumps() && d.delta_p_next > 0.0 && rng.bernoulli(d.delta_p_next)) {
        d.dnp_next = 1;
        d.zp_next = rng.normal(p.mu_p + p.gamma_p * d.v_next, p.sigma_p);
    }
    d.r_next = p.mu + p.gamma * d.v_next + std::sqrt(d.v_next) * rng.normal() +
               d.zp_next * d.dnp_next;
    return d;
}

}  // namespace hsv
