#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "hsv/common.hpp"
#include "hsv/csv.hpp"
#include "hsv/sampler.hpp"
#include "hsv/stats.hpp"

namespace hsv {

std::vector<double> ChainOutput::column(const std::string& name) const {
    for (std::size_t i = 0; i < param_names.size(); ++i) {
        if (param_names[i] != name) continue;
        std::vector<double> out;
        out.reserve(draws.size());
        for (const auto& row : draws) out.push_back(row[i]);
        return out;
    }
    throw InputError("chain has no parameter '" + name + "'");
}

ModelParams ChainOutput::mpm_params() const {
    if (draws.empty()) throw InputError("empty chain");
    ModelParams p = last_params;  // carries variant and fixed zeros
    for (std::size_t i = 0; i < param_names.size(); ++i) {
        double s = 0.0;
        for (const auto& row : draws) s += row[i];
        p.set(param_names[i], s / static_cast<double>(draws.size()));
    }
    return p;
}

ModelParams default_initial_params(const ObservedData& data, Variant variant) {
    ModelParams p;
    p.variant = variant;
    const std::size_t T = data.size();

    double mean_bv = 0.0, mean_r = 0.0, dnp_mean = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        mean_bv += std::exp(data.lnbv[t]);
        mean_r += data.r[t];
        dnp_mean += data.dnp[t];
    }
    mean_bv /= static_cast<double>(T);
    mean_r /= static_cast<double>(T);
    dnp_mean /= static_cast<double>(T);

    p.theta = std::clamp(mean_bv, 1e-6, 0.5);
    p.kappa = 0.1;
    p.sigma_v = std::min(0.5 * std::sqrt(2.0 * p.kappa * p.theta), 0.02);
    p.rho = -0.3;
    p.mu = std::clamp(mean_r, -9.0, 9.0);
    p.gamma = -1.0;
    p.sigma_bv = 0.5;

    double zp_mean = 0.0, zp_sq = 0.0, n_jump = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        if (data.dnp[t] != 1) continue;
        zp_mean += data.zp[t];
        zp_sq += data.zp[t] * data.zp[t];
        n_jump += 1.0;
    }
    if (n_jump >= 2.0) {
        zp_mean /= n_jump;
        const double var = std::max(zp_sq / n_jump - zp_mean * zp_mean, 1e-4);
        p.mu_p = std::clamp(zp_mean, -9.0, 9.0);
        p.sigma_p = std::sqrt(var);
    } else {
        p.mu_p = 0.0;
        p.sigma_p = 1.0;
    }
    p.gamma_p = 0.0;

    p.delta0_p = std::clamp(dnp_mean, 0.02, 0.5);
    p.alpha_p = 0.1;
    p.beta_pp = 0.05;
    p.delta0_v = std::clamp(0.7 * p.delta0_p, 0.02, 0.5);
    p.alpha_v = 0.08;
    p.beta_vv = 0.03;
    p.beta_vp = 0.0;
    p.beta_vp_neg = 0.0;
    p.mu_v = 0.02;
    if (p.has_beta_vp()) p.beta_vp = 1e-4;
    if (p.has_beta_vp_neg()) p.beta_vp_neg = 1e-4;
    if (variant == Variant::M5) {
        p.alpha_p = 0.3 * p.delta0_p / p.v_bar();
        p.alpha_v = 0.3 * p.delta0_v / p.v_bar();
    }
    if (const auto why = p.invalid_reason())
        throw NumericError("default_initial_params produced invalid state: " + *why);
    return p;
}

ChainOutput run_chain(const ObservedData& data, Variant variant, const PriorConfig& prior,
                      const ChainConfig& cfg) {
    const ModelParams init = default_initial_params(data, variant);
    Sampler sampler(data, init, prior, cfg);
    Rng rng(cfg.seed);

    sampler.set_tuning(true);
    for (std::size_t i = 0; i < cfg.burn_in; ++i) sampler.sweep(rng);
    sampler.set_tuning(false);
    sampler.reset_acceptance();

    ChainOutput out;
    out.variant = variant;
    out.param_names = sampler.params().param_names();
    out.seed = cfg.seed;
    out.burn_in = cfg.burn_in;
    out.keep = cfg.keep;
    out.thin = std::max<std::size_t>(cfg.thin, 1);
    out.draws.reserve(cfg.keep / out.thin);

    std::size_t retained = 0;
    for (std::size_t k = 1; k <= cfg.keep; ++k) {
        sampler.sweep(rng);
        if (k % out.thin != 0) continue;
        std::vector<double> row;
        row.reserve(out.param_names.size());
        for (const auto& name : out.param_names) row.push_back(sampler.params().get(name));
        out.draws.push_back(std::move(row));
        ++retained;
        if (cfg.latent_snapshot_stride > 0 && retained % cfg.latent_snapshot_stride == 0) {
            out.v_snapshots.push_back(sampler.latents().v);
            out.v_snapshot_iters.push_back(retained);
        }
    }
    out.acceptance = sampler.acceptance();
    out.last_params = sampler.params();
    out.last_latents = sampler.latents();
    return out;
}

void write_chain_csv(const std::string& path, const ChainOutput& chain) {
    CsvTable t;
    t.header = chain.param_names;
    for (const auto& row : chain.draws) {
        std::vector<std::string> r;
        r.reserve(row.size());
        for (double x : row) r.push_back(format_double(x));
        t.rows.push_back(std::move(r));
    }
    write_csv(path, t);
}

ChainOutput read_chain_csv(const std::string& path, Variant variant) {
    const CsvTable t = read_csv(path);
    ChainOutput out;
    out.variant = variant;
    out.param_names = t.header;
    out.last_params.variant = variant;
    for (const auto& row : t.rows) {
        std::vector<double> r;
        r.reserve(row.size());
        for (const auto& s : row) r.push_back(parse_double(s));
        out.draws.push_back(std::move(r));
    }
    if (out.draws.empty()) throw InputError(path + ": chain has no draws");
    for (std::size_t i = 0; i < out.param_names.size(); ++i)
        out.last_params.set(out.param_names[i], out.draws.back()[i]);
    return out;
}

void write_acceptance_jsonl(const std::string& path, const ChainOutput& chain) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw InputError("cannot write " + path);
    for (const auto& a : chain.acceptance) {
        nlohmann::json j;
        j["block"] = a.name;
        j["proposals"] = a.proposals;
        j["accepts"] = a.accepts;
        j["rate"] = a.rate();
        j["tuned"] = a.tuned;
        j["scale"] = a.scale;
        f << j.dump() << "\n";
    }
}

}  // namespace hsv
