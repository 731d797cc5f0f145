#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hsv {

// Model family: MF is the full bivariate Hawkes specification, M1-M7 the
// nested/alternative variants (M5 makes intensities affine in V, M6 constant,
// M7 removes jumps entirely).
enum class Variant { MF, M1, M2, M3, M4, M5, M6, M7 };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

struct ModelParams {
    Variant variant = Variant::MF;

    double mu = 0.0;          // return drift
    double gamma = 0.0;       // volatility feedback
    double mu_p = 0.0;        // price jump size intercept
    double gamma_p = 0.0;     // price jump size loading on V
    double sigma_p = 1.0;     // price jump size sd
    double sigma_bv = 0.5;    // lnBV measurement sd
    double kappa = 0.1;       // variance mean reversion (daily)
    double theta = 0.01;      // unconditional diffusive variance
    double sigma_v = 0.01;    // vol-of-vol
    double rho = 0.0;         // leverage correlation
    double delta0_p = 0.1;    // unconditional price jump intensity
    double alpha_p = 0.1;     // price intensity mean reversion (M5: loading on V)
    double beta_pp = 0.05;    // price self-excitation
    double delta0_v = 0.1;    // unconditional variance jump intensity
    double alpha_v = 0.1;     // variance intensity mean reversion (M5: loading on V)
    double beta_vv = 0.05;    // variance self-excitation
    double beta_vp = 0.0;     // price-jump feedback into variance intensity
    double beta_vp_neg = 0.0; // negative-price-jump feedback
    double mu_v = 0.01;       // variance jump mean

    double psi() const { return rho * sigma_v; }
    double omega() const { return sigma_v * sigma_v * (1.0 - rho * rho); }
    void set_psi_omega(double psi, double omega);

    // Variant structure queries.
    bool models_price_jumps() const { return variant != Variant::M7; }
    bool models_variance_jumps() const {
        return variant != Variant::M4 && variant != Variant::M7;
    }
    bool free_dnv() const {  // dNv sampled as a latent Bernoulli path
        return models_variance_jumps() && variant != Variant::M3;
    }
    bool hawkes_p() const {
        return variant == Variant::MF || variant == Variant::M1 || variant == Variant::M2 ||
               variant == Variant::M3 || variant == Variant::M4;
    }
    bool hawkes_v() const {
        return variant == Variant::MF || variant == Variant::M1 || variant == Variant::M2;
    }
    bool has_beta_vp() const { return variant == Variant::MF || variant == Variant::M1; }
    bool has_beta_vp_neg() const { return variant == Variant::MF; }
    bool has_delta0_v() const { return free_dnv(); }

    // Unconditional variance-jump intensity entering E[V] and V_1: delta0_v
    // normally, delta0_p under M3 (jumps tied together), 0 when no jumps.
    double unconditional_dnv_intensity() const;

    // E[V_t] = theta + mu_v * E[dNv intensity] / kappa; also the pinned V_1.
    double v_bar() const;

    // M5 intercepts implied by the unconditional intensities.
    double alpha_p0() const { return delta0_p - alpha_p * v_bar(); }
    double alpha_v0() const { return delta0_v - alpha_v * v_bar(); }

    // Names of the free parameters for this variant, in reporting order.
    std::vector<std::string> param_names() const;
    double get(const std::string& name) const;
    void set(const std::string& name, double value);

    // Restriction check; nullopt when valid, else the violated condition.
    std::optional<std::string> invalid_reason() const;
    bool valid() const { return !invalid_reason().has_value(); }

    std::string serialize() const;  // name=value lines (chain checkpoints)
    static ModelParams deserialize(const std::string& text);
};

// Mean over the path of P(Zp < 0 | V_t) = Phi(-(mu_p + gamma_p V)/sigma_p).
double f_zp_at_zero(const ModelParams& p, const std::vector<double>& v_path);
// Standalone convention: evaluated at the stationary mean of V.
double f_zp_at_zero_stationary(const ModelParams& p);

struct UnconditionalInversion {
    double delta_inf_p = 0.0;
    double delta_inf_v = 0.0;
};

// Solve the stationarity identities for the intensity baselines given the
// unconditional intensities. f_zp0 defaults to the stationary-mean value.
UnconditionalInversion invert_unconditional(const ModelParams& p,
                                            std::optional<double> f_zp0 = std::nullopt);

struct IntensityPaths {
    std::vector<double> delta_p;
    std::vector<double> delta_v;
};

// Deterministic intensity recursions given parameters and jump histories.
// v_path is required for M5; f_zp0 overrides the stationary default (the
// sampler passes its current-path average). Outputs clamped to
// (1e-10, 1-1e-10) except for M7, which is identically zero.
IntensityPaths intensity_paths(const ModelParams& p, const std::vector<int>& dnp,
                               const std::vector<double>& zp, const std::vector<int>& dnv,
                               const std::vector<double>& v_path = {},
                               std::optional<double> f_zp0 = std::nullopt);

inline constexpr double kIntensityClamp = 1e-10;

// Priors of the static parameters (hyperparameters with the defaults of the
// estimation setup; mu_v's inverse gamma uses the rate form so that the
// implied prior mean/sd are 0.007/0.002).
struct PriorConfig {
    double psi_mean = -0.005;
    double psi_k = 5.0;  // conditional variance of psi is omega / psi_k
    double omega_shape = 10.0, omega_scale = 0.001;
    double sigma_p2_shape = 3.0, sigma_p2_scale = 1.0;
    double sigma_bv2_shape = 3.0, sigma_bv2_scale = 1.0;
    double delta0_a = 10.0, delta0_b = 90.0;
    double mu_v_shape = 20.0, mu_v_scale = 1.0 / 7.2;
    double mu_lo = -10.0, mu_hi = 10.0;
    double mu_p_lo = -10.0, mu_p_hi = 10.0;
    double gamma_p_lo = -100.0, gamma_p_hi = 100.0;
    double gamma_lo = -100.0, gamma_hi = 0.0;
    double kappa_max = 1.0, theta_max = 1.0;
};

// log p(phi) for the variant's free parameters (restriction indicators
// included; cross-parameter truncations enter unnormalized).
double log_prior(const ModelParams& p, const PriorConfig& prior);

}  // namespace hsv
