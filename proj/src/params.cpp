#include "hsv/params.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hsv/common.hpp"
#include "hsv/csv.hpp"
#include "hsv/stats.hpp"

namespace hsv {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::MF: return "MF";
        case Variant::M1: return "M1";
        case Variant::M2: return "M2";
        case Variant::M3: return "M3";
        case Variant::M4: return "M4";
        case Variant::M5: return "M5";
        case Variant::M6: return "M6";
        case Variant::M7: return "M7";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    for (Variant v : {Variant::MF, Variant::M1, Variant::M2, Variant::M3, Variant::M4,
                      Variant::M5, Variant::M6, Variant::M7})
        if (variant_name(v) == s) return v;
    throw InputError("unknown model variant '" + s + "' (expected MF or M1..M7)");
}

void ModelParams::set_psi_omega(double psi, double omega) {
    if (omega <= 0.0) throw NumericError("omega must be positive");
    sigma_v = std::sqrt(psi * psi + omega);
    rho = psi / sigma_v;
}

double ModelParams::unconditional_dnv_intensity() const {
    if (!models_variance_jumps()) return 0.0;
    if (variant == Variant::M3) return delta0_p;
    return delta0_v;
}

double ModelParams::v_bar() const {
    return theta + mu_v * unconditional_dnv_intensity() / kappa;
}

std::vector<std::string> ModelParams::param_names() const {
    std::vector<std::string> n = {"mu", "gamma"};
    if (models_price_jumps()) {
        n.insert(n.end(), {"mu_p", "gamma_p", "sigma_p"});
    }
    n.insert(n.end(), {"sigma_bv", "kappa", "theta", "sigma_v", "rho"});
    if (models_price_jumps()) n.push_back("delta0_p");
    if (hawkes_p()) n.insert(n.end(), {"alpha_p", "beta_pp"});
    if (variant == Variant::M5) n.push_back("alpha_p");
    if (has_delta0_v()) n.push_back("delta0_v");
    if (hawkes_v()) n.insert(n.end(), {"alpha_v", "beta_vv"});
    if (variant == Variant::M5) n.push_back("alpha_v");
    if (has_beta_vp()) n.push_back("beta_vp");
    if (has_beta_vp_neg()) n.push_back("beta_vp_neg");
    if (models_variance_jumps()) n.push_back("mu_v");
    return n;
}

namespace {

std::map<std::string, double ModelParams::*> field_map() {
    return {
        {"mu", &ModelParams::mu},
        {"gamma", &ModelParams::gamma},
        {"mu_p", &ModelParams::mu_p},
        {"gamma_p", &ModelParams::gamma_p},
        {"sigma_p", &ModelParams::sigma_p},
        {"sigma_bv", &ModelParams::sigma_bv},
        {"kappa", &ModelParams::kappa},
        {"theta", &ModelParams::theta},
        {"sigma_v", &ModelParams::sigma_v},
        {"rho", &ModelParams::rho},
        {"delta0_p", &ModelParams::delta0_p},
        {"alpha_p", &ModelParams::alpha_p},
        {"beta_pp", &ModelParams::beta_pp},
        {"delta0_v", &ModelParams::delta0_v},
        {"alpha_v", &ModelParams::alpha_v},
        {"beta_vv", &ModelParams::beta_vv},
        {"beta_vp", &ModelParams::beta_vp},
        {"beta_vp_neg", &ModelParams::beta_vp_neg},
        {"mu_v", &ModelParams::mu_v},
    };
}

}  // namespace

double ModelParams::get(const std::string& name) const {
    const auto m = field_map();
    const auto it = m.find(name);
    if (it == m.end()) throw InputError("unknown parameter '" + name + "'");
    return this->*(it->second);
}

void ModelParams::set(const std::string& name, double value) {
    const auto m = field_map();
    const auto it = m.find(name);
    if (it == m.end()) throw InputError("unknown parameter '" + name + "'");
    this->*(it->second) = value;
}

std::optional<std::string> ModelParams::invalid_reason() const {
    auto bad = [](const std::string& s) { return std::optional<std::string>(s); };
    if (!(sigma_bv > 0.0)) return bad("sigma_bv <= 0");
    if (!(kappa > 0.0 && kappa < 1.0)) return bad("kappa outside (0,1)");
    if (!(theta > 0.0)) return bad("theta <= 0");
    if (!(sigma_v > 0.0)) return bad("sigma_v <= 0");
    if (!(rho > -1.0 && rho < 1.0)) return bad("rho outside (-1,1)");
    if (!(sigma_v * sigma_v <= 2.0 * kappa * theta)) return bad("Feller condition violated");
    if (models_price_jumps()) {
        if (!(sigma_p > 0.0)) return bad("sigma_p <= 0");
        if (!(delta0_p > 0.0 && delta0_p < 1.0)) return bad("delta0_p outside (0,1)");
    }
    if (models_variance_jumps()) {
        if (!(mu_v > 0.0)) return bad("mu_v <= 0");
    }
    if (has_delta0_v()) {
        if (!(delta0_v > 0.0 && delta0_v < 1.0)) return bad("delta0_v outside (0,1)");
    }
    if (hawkes_p()) {
        if (!(alpha_p > 0.0 && alpha_p < 1.0)) return bad("alpha_p outside (0,1)");
        if (!(beta_pp > 0.0)) return bad("beta_pp <= 0");
        if (!(alpha_p > beta_pp)) return bad("alpha_p <= beta_pp");
    }
    if (hawkes_v()) {
        if (!(alpha_v > 0.0 && alpha_v < 1.0)) return bad("alpha_v outside (0,1)");
        if (!(beta_vv > 0.0)) return bad("beta_vv <= 0");
        if (!(alpha_v > beta_vv)) return bad("alpha_v <= beta_vv");
        if (!(beta_vp >= 0.0)) return bad("beta_vp < 0");
        if (!(beta_vp_neg >= 0.0)) return bad("beta_vp_neg < 0");
        // delta_inf_v must be positive given the price-jump feedback load.
        const double load = (beta_vp + beta_vp_neg * f_zp_at_zero_stationary(*this)) * delta0_p;
        if (!(delta0_v * (alpha_v - beta_vv) > load))
            return bad("nonstationary intensity configuration (delta_inf_v <= 0)");
    }
    if (variant == Variant::M5) {
        if (!(alpha_p >= 0.0)) return bad("alpha_p < 0");
        if (!(alpha_v >= 0.0)) return bad("alpha_v < 0");
        if (!(alpha_p0() >= 0.0)) return bad("alpha_p0 < 0 (alpha_p too large)");
        if (!(alpha_v0() >= 0.0)) return bad("alpha_v0 < 0 (alpha_v too large)");
    }
    return std::nullopt;
}

std::string ModelParams::serialize() const {
    std::stringstream out;
    out << "variant = " << variant_name(variant) << "\n";
    for (const auto& n : param_names()) out << n << " = " << format_double(get(n)) << "\n";
    return out.str();
}

ModelParams ModelParams::deserialize(const std::string& text) {
    ModelParams p;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "variant")
            p.variant = parse_variant(val);
        else
            p.set(key, parse_double(val));
    }
    return p;
}

double f_zp_at_zero(const ModelParams& p, const std::vector<double>& v_path) {
    if (v_path.empty()) throw InputError("f_zp_at_zero: empty V path");
    double s = 0.0;
    for (double v : v_path) s += normal_cdf(-(p.mu_p + p.gamma_p * v) / p.sigma_p);
    return s / static_cast<double>(v_path.size());
}

double f_zp_at_zero_stationary(const ModelParams& p) {
    return normal_cdf(-(p.mu_p + p.gamma_p * p.v_bar()) / p.sigma_p);
}

UnconditionalInversion invert_unconditional(const ModelParams& p, std::optional<double> f_zp0) {
    UnconditionalInversion out;
    if (p.hawkes_p()) {
        if (!(p.alpha_p > p.beta_pp && p.alpha_p > 0.0))
            throw NumericError("nonstationary intensity configuration");
        out.delta_inf_p = p.delta0_p * (p.alpha_p - p.beta_pp) / p.alpha_p;
    }
    if (p.hawkes_v()) {
        if (!(p.alpha_v > p.beta_vv && p.alpha_v > 0.0))
            throw NumericError("nonstationary intensity configuration");
        const double f = f_zp0.value_or(f_zp_at_zero_stationary(p));
        const double num =
            p.delta0_v * (p.alpha_v - p.beta_vv) - (p.beta_vp + p.beta_vp_neg * f) * p.delta0_p;
        if (!(num > 0.0)) throw NumericError("nonstationary intensity configuration");
        out.delta_inf_v = num / p.alpha_v;
    }
    return out;
}

namespace {

inline double clamp_intensity(double d) {
    return std::clamp(d, kIntensityClamp, 1.0 - kIntensityClamp);
}

}  // namespace

IntensityPaths intensity_paths(const ModelParams& p, const std::vector<int>& dnp,
                               const std::vector<double>& zp, const std::vector<int>& dnv,
                               const std::vector<double>& v_path, std::optional<double> f_zp0) {
    const std::size_t T = dnp.size();
    IntensityPaths out;
    out.delta_p.assign(T, 0.0);
    out.delta_v.assign(T, 0.0);
    if (T == 0) return out;

    switch (p.variant) {
        case Variant::M7:
            return out;  // no jumps: both paths identically zero, no clamping
        case Variant::M6:
            std::fill(out.delta_p.begin(), out.delta_p.end(), clamp_intensity(p.delta0_p));
            std::fill(out.delta_v.begin(), out.delta_v.end(), clamp_intensity(p.delta0_v));
            return out;
        case Variant::M5: {
            if (v_path.size() != T) throw InputError("M5 intensity paths need the V path");
            const double a_p0 = p.alpha_p0(), a_v0 = p.alpha_v0();
            for (std::size_t t = 0; t < T; ++t) {
                out.delta_p[t] = clamp_intensity(a_p0 + p.alpha_p * v_path[t]);
                out.delta_v[t] = clamp_intensity(a_v0 + p.alpha_v * v_path[t]);
            }
            return out;
        }
        default:
            break;
    }

    const UnconditionalInversion inv = invert_unconditional(p, f_zp0);
    out.delta_p[0] = clamp_intensity(p.delta0_p);
    const double base_p = p.alpha_p * inv.delta_inf_p;
    for (std::size_t t = 1; t < T; ++t) {
        out.delta_p[t] = clamp_intensity(base_p + (1.0 - p.alpha_p) * out.delta_p[t - 1] +
                                         p.beta_pp * dnp[t - 1]);
    }

    if (p.hawkes_v()) {
        out.delta_v[0] = clamp_intensity(p.delta0_v);
        const double base_v = p.alpha_v * inv.delta_inf_v;
        for (std::size_t t = 1; t < T; ++t) {
            const int dnp_neg = (dnp[t - 1] == 1 && zp[t - 1] < 0.0) ? 1 : 0;
            out.delta_v[t] =
                clamp_intensity(base_v + (1.0 - p.alpha_v) * out.delta_v[t - 1] +
                                p.beta_vv * dnv[t - 1] + p.beta_vp * dnp[t - 1] +
                                p.beta_vp_neg * dnp_neg);
        }
    }
    return out;
}

double log_prior(const ModelParams& p, const PriorConfig& c) {
    if (!p.valid()) return neg_inf();
    double lp = 0.0;

    auto uniform_term = [&](double x, double lo, double hi) {
        if (!(x > lo && x < hi)) {
            lp = neg_inf();
            return;
        }
        lp -= std::log(hi - lo);
    };

    uniform_term(p.mu, c.mu_lo, c.mu_hi);
    uniform_term(p.gamma, c.gamma_lo, c.gamma_hi);
    uniform_term(p.kappa, 0.0, c.kappa_max);
    uniform_term(p.theta, 0.0, c.theta_max);
    if (!std::isfinite(lp)) return neg_inf();

    // (psi, omega) blocked reparameterization of (rho, sigma_v).
    const double psi = p.psi(), omega = p.omega();
    lp += inv_gamma_logpdf(omega, c.omega_shape, c.omega_scale);
    lp += normal_logpdf(psi, c.psi_mean, std::sqrt(omega / c.psi_k));
    lp += inv_gamma_logpdf(p.sigma_bv * p.sigma_bv, c.sigma_bv2_shape, c.sigma_bv2_scale);

    if (p.models_price_jumps()) {
        uniform_term(p.mu_p, c.mu_p_lo, c.mu_p_hi);
        uniform_term(p.gamma_p, c.gamma_p_lo, c.gamma_p_hi);
        lp += inv_gamma_logpdf(p.sigma_p * p.sigma_p, c.sigma_p2_shape, c.sigma_p2_scale);
        lp += beta_logpdf(p.delta0_p, c.delta0_a, c.delta0_b);
    }
    if (p.has_delta0_v()) lp += beta_logpdf(p.delta0_v, c.delta0_a, c.delta0_b);
    if (p.models_variance_jumps())
        lp += inv_gamma_logpdf(p.mu_v, c.mu_v_shape, c.mu_v_scale);

    if (p.hawkes_p()) lp += std::log(2.0);  // uniform on {0 < beta_pp < alpha_p < 1}
    if (p.hawkes_v()) lp += std::log(2.0);  // uniform on {0 < beta_vv < alpha_v < 1}
    // beta_vp, beta_vp_neg: U(0,1); cross-parameter feasibility enters as an
    // indicator only (already enforced by invalid_reason).
    if (p.variant == Variant::M5) {
        // alpha uniform on (0, delta0 / v_bar), conditionally normalized.
        const double vb = p.v_bar();
        if (!(vb > 0.0)) return neg_inf();
        lp += std::log(vb / p.delta0_p);
        lp += std::log(vb / p.delta0_v);
    }
    return lp;
}

}  // namespace hsv
