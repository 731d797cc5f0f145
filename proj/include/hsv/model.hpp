#pragma once

#include <vector>

#include "hsv/data.hpp"
#include "hsv/params.hpp"

namespace hsv {

// Latent side of the state space: the variance path, variance-jump sizes and
// occurrences, plus the (conditionally deterministic) intensity paths kept as
// caches of the recursions. V[0] is pinned to v_bar(params) throughout.
struct LatentState {
    std::vector<double> v;
    std::vector<double> zv;
    std::vector<int> dnv;
    std::vector<double> delta_p;
    std::vector<double> delta_v;

    std::size_t size() const { return v.size(); }
};

// Deterministic initial state consistent with the imposed initial conditions
// (V_1 = v_bar, delta_1 = delta0, dNv_1 = dNp_1), with V set from exp(lnbv)
// and zv fresh prior draws left to the caller.
LatentState make_initial_latents(const ModelParams& params, const ObservedData& data);

// Refresh the cached intensity paths from the recursion (sampler passes its
// current-path F_Zp(0) for the variance side).
void refresh_intensity_paths(const ModelParams& params, const ObservedData& data,
                             LatentState& latents, std::optional<double> f_zp0 = std::nullopt);

// Gaussian transition of V_{t+1} given day-t information, reparameterized so
// the leverage term conditions on the observed return; truncated to
// V_{t+1} > 0 with the normalizer included.
double variance_transition_logpdf(double v_next, double v_t, double r_t, double zp_t, int dnp_t,
                                  double zv_t, int dnv_t, const ModelParams& params);

// Measurement terms. Under M7 the jump measures are not modeled and the
// return equation carries no jump term.
double return_logpdf(double r_t, double v_t, double zp_t, int dnp_t, const ModelParams& params);
double lnbv_logpdf(double lnbv_t, double v_t, const ModelParams& params);
double zp_logpdf(double zp_t, double v_t, const ModelParams& params);

struct LogPosteriorOptions {
    double likelihood_scale = 1.0;  // 0 disables all data terms (prior recovery)
    bool include_prior = true;
};

// Complete-data log posterior kernel of Eq.-(34) form: measurement terms,
// transitions, jump-size priors, Bernoulli intensity terms and log p(phi).
// Returns -inf on any invariant violation. Intensity paths are recomputed
// internally; f_zp0 follows the sampler convention when a V path is present.
double complete_data_logposterior(const ModelParams& params, const LatentState& latents,
                                  const ObservedData& data, const PriorConfig& prior,
                                  const LogPosteriorOptions& opts = {});

}  // namespace hsv
