#include "hsv/model.hpp"

#include <cmath>

#include "hsv/common.hpp"
#include "hsv/stats.hpp"

namespace hsv {

LatentState make_initial_latents(const ModelParams& params, const ObservedData& data) {
    const std::size_t T = data.size();
    LatentState s;
    s.v.resize(T);
    s.zv.assign(T, params.models_variance_jumps() ? params.mu_v : 0.0);
    s.dnv.assign(T, 0);
    s.v[0] = params.v_bar();
    for (std::size_t t = 1; t < T; ++t) s.v[t] = std::max(std::exp(data.lnbv[t]), 1e-10);
    if (params.models_variance_jumps()) {
        if (params.variant == Variant::M3) {
            s.dnv = data.dnp;
        } else {
            s.dnv[0] = data.dnp[0];
        }
    }
    refresh_intensity_paths(params, data, s);
    return s;
}

void refresh_intensity_paths(const ModelParams& params, const ObservedData& data,
                             LatentState& latents, std::optional<double> f_zp0) {
    std::optional<double> f = f_zp0;
    if (!f && params.has_beta_vp_neg() && !latents.v.empty())
        f = f_zp_at_zero(params, latents.v);
    IntensityPaths paths =
        intensity_paths(params, data.dnp, data.zp, latents.dnv, latents.v, f);
    latents.delta_p = std::move(paths.delta_p);
    latents.delta_v = std::move(paths.delta_v);
}

double variance_transition_logpdf(double v_next, double v_t, double r_t, double zp_t, int dnp_t,
                                  double zv_t, int dnv_t, const ModelParams& params) {
    if (!(v_t > 0.0)) throw NumericError("variance_transition_logpdf: V_t <= 0");
    const double jump_r = params.models_price_jumps() ? zp_t * dnp_t : 0.0;
    const double jump_v = params.models_variance_jumps() ? zv_t * dnv_t : 0.0;
    const double w = r_t - jump_r - params.mu - params.gamma * v_t;
    const double mean = params.kappa * params.theta + (1.0 - params.kappa) * v_t +
                        params.psi() * w + jump_v;
    const double sd = std::sqrt(params.omega() * v_t);
    return truncated_normal_logpdf(v_next, mean, sd);
}

double return_logpdf(double r_t, double v_t, double zp_t, int dnp_t, const ModelParams& params) {
    const double jump = params.models_price_jumps() ? zp_t * dnp_t : 0.0;
    return normal_logpdf(r_t, params.mu + params.gamma * v_t + jump, std::sqrt(v_t));
}

double lnbv_logpdf(double lnbv_t, double v_t, const ModelParams& params) {
    return normal_logpdf(lnbv_t, std::log(v_t), params.sigma_bv);
}

double zp_logpdf(double zp_t, double v_t, const ModelParams& params) {
    return normal_logpdf(zp_t, params.mu_p + params.gamma_p * v_t, params.sigma_p);
}

double complete_data_logposterior(const ModelParams& params, const LatentState& latents,
                                  const ObservedData& data, const PriorConfig& prior,
                                  const LogPosteriorOptions& opts) {
    const std::size_t T = data.size();
    if (latents.size() != T || latents.zv.size() != T || latents.dnv.size() != T) return neg_inf();
    if (!params.valid()) return neg_inf();

    // Latent invariants: positive variance, pinned V_1, initial and
    // variant-imposed jump-occurrence structure, nonnegative jump sizes.
    for (std::size_t t = 0; t < T; ++t) {
        if (!(latents.v[t] > 0.0) || !std::isfinite(latents.v[t])) return neg_inf();
        if (latents.dnv[t] != 0 && latents.dnv[t] != 1) return neg_inf();
        if (!(latents.zv[t] >= 0.0)) return neg_inf();
    }
    const double v1 = params.v_bar();
    if (std::abs(latents.v[0] - v1) > 1e-9 * std::max(1.0, v1)) return neg_inf();
    if (params.models_variance_jumps()) {
        if (params.variant == Variant::M3) {
            for (std::size_t t = 0; t < T; ++t)
                if (latents.dnv[t] != data.dnp[t]) return neg_inf();
        } else if (latents.dnv[0] != data.dnp[0]) {
            return neg_inf();
        }
    } else {
        for (std::size_t t = 0; t < T; ++t)
            if (latents.dnv[t] != 0) return neg_inf();
    }

    double lp = opts.include_prior ? log_prior(params, prior) : 0.0;
    if (!std::isfinite(lp)) return neg_inf();

    const double scale = opts.likelihood_scale;
    if (scale == 0.0) return lp;

    std::optional<double> f;
    if (params.has_beta_vp_neg()) f = f_zp_at_zero(params, latents.v);
    const IntensityPaths paths =
        intensity_paths(params, data.dnp, data.zp, latents.dnv, latents.v, f);

    double ll = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        ll += return_logpdf(data.r[t], latents.v[t], data.zp[t], data.dnp[t], params);
        ll += lnbv_logpdf(data.lnbv[t], latents.v[t], params);
        if (params.models_price_jumps()) {
            if (data.dnp[t] == 1) ll += zp_logpdf(data.zp[t], latents.v[t], params);
            ll += bernoulli_logpmf(data.dnp[t], paths.delta_p[t]);
        }
        if (params.models_variance_jumps()) {
            ll += exponential_logpdf(latents.zv[t], params.mu_v);
            if (params.free_dnv() && t >= 1)
                ll += bernoulli_logpmf(latents.dnv[t], paths.delta_v[t]);
        }
        if (t + 1 < T) {
            ll += variance_transition_logpdf(latents.v[t + 1], latents.v[t], data.r[t],
                                             data.zp[t], data.dnp[t], latents.zv[t],
                                             latents.dnv[t], params);
        }
        if (!std::isfinite(ll)) return neg_inf();
    }
    return lp + scale * ll;
}

}  // namespace hsv
