#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hsv/data.hpp"
#include "hsv/model.hpp"
#include "hsv/rng.hpp"

namespace hsv {

struct ChainConfig {
    std::size_t burn_in = 100000;
    std::size_t keep = 100000;
    std::size_t thin = 10;
    std::size_t v_block_size = 20;
    std::size_t dnv_horizon = 0;  // downstream terms per site; 0 = full T (exact)
    double target_accept = 0.25;  // tuned MH blocks aim for the 15-30% band
    std::size_t latent_snapshot_stride = 0;  // every k-th retained draw; 0 = off
    std::uint64_t seed = 1;
    double likelihood_scale = 1.0;  // 0 = prior-recovery runs (data terms off)
};

struct AcceptanceRecord {
    std::string name;
    std::size_t proposals = 0;
    std::size_t accepts = 0;
    bool tuned = false;  // subject to the acceptance band (vs conjugate moves)
    double scale = 0.0;
    double rate() const {
        return proposals == 0 ? 0.0 : static_cast<double>(accepts) / proposals;
    }
};

struct ChainOutput {
    Variant variant = Variant::MF;
    std::vector<std::string> param_names;
    std::vector<std::vector<double>> draws;  // retained iterations x params
    std::vector<std::vector<double>> v_snapshots;
    std::vector<std::size_t> v_snapshot_iters;
    std::vector<AcceptanceRecord> acceptance;
    ModelParams last_params;
    LatentState last_latents;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0, keep = 0, thin = 0;

    std::vector<double> column(const std::string& name) const;
    ModelParams mpm_params() const;  // marginal posterior means, variant-tagged
};

class StaticUpdater;

// Hybrid Gibbs/MH sampler over (V_{2:T}, Zv, dNv, phi). V_1 stays pinned to
// v_bar(params) and is rewritten whenever a parameter move shifts it.
class Sampler {
  public:
    Sampler(const ObservedData& data, const ModelParams& init, const PriorConfig& prior,
            const ChainConfig& cfg);
    ~Sampler();

    void sweep(Rng& rng);

    void sample_volatility(Rng& rng);
    void sample_variance_jump_occurrences(Rng& rng);
    void sample_variance_jump_sizes(Rng& rng);
    void sample_static_params(Rng& rng);

    // Latent-only refresh restricted to days [t_lo, T) (terminal-state
    // smoothing for forecasting); statics untouched.
    void sweep_latents_tail(Rng& rng, std::size_t t_lo);

    void set_tuning(bool on) { tuning_ = on; }
    void pin(const std::string& name) { pinned_.insert(name); }
    bool is_pinned(const std::string& name) const { return pinned_.count(name) > 0; }
    const std::set<std::string>& pinned() const { return pinned_; }

    const ModelParams& params() const { return params_; }
    ModelParams& mutable_params() { return params_; }
    const LatentState& latents() const { return latents_; }
    LatentState& mutable_latents() { return latents_; }
    const ObservedData& data() const { return data_; }
    const PriorConfig& prior() const { return prior_; }
    const ChainConfig& config() const { return cfg_; }

    double log_target();          // cached complete-data log posterior
    void invalidate_target();     // after external state edits
    void refresh_derived_state(); // repin V_1, recompute intensity caches

    // Static sub-blocks in sweep order (the evidence module's decomposition).
    struct UpdaterInfo {
        std::string name;
        std::vector<std::string> params;
        bool tuned = false;
    };
    std::vector<UpdaterInfo> updater_infos() const;
    std::vector<double> updater_values(std::size_t idx) const;
    // log alpha(current -> star) + log q(star | current state); -inf allowed.
    double cj_numerator_term(std::size_t idx, const std::vector<double>& star, Rng& rng);
    // Draw from q(. | state); return log alpha(star -> candidate).
    double cj_denominator_term(std::size_t idx, Rng& rng);

    std::vector<AcceptanceRecord> acceptance() const;
    void reset_acceptance();

  private:
    friend class StaticUpdater;
    friend struct SamplerTestAccess;

    void build_updaters();
    void sample_volatility_range(Rng& rng, std::size_t lo);
    void sample_dnv_range(Rng& rng, std::size_t lo);
    void sample_zv_range(Rng& rng, std::size_t lo);
    bool v_block_move(Rng& rng, std::size_t a, std::size_t b);
    double block_local_target(std::size_t a, std::size_t b) const;
    double dnv_site_logdiff(std::size_t t, int cand) const;
    void apply_dnv_flip(std::size_t t, int cand);

    const ObservedData& data_;
    ModelParams params_;
    PriorConfig prior_;
    ChainConfig cfg_;
    LatentState latents_;
    std::set<std::string> pinned_;
    bool tuning_ = false;
    std::size_t tune_steps_ = 0;

    double cached_target_ = 0.0;
    bool target_valid_ = false;

    double v_block_scale_ = 1.0;
    AcceptanceRecord v_accept_;
    std::size_t v_sweep_updates_ = 0;  // sweeps with at least one accepted block
    std::size_t v_sweeps_ = 0;

    std::vector<std::unique_ptr<StaticUpdater>> updaters_;
};

// White-box hooks for the test suite: the incremental block/site targets must
// agree with full recomputation of the complete-data log posterior.
struct SamplerTestAccess {
    static double block_local_target(const Sampler& s, std::size_t a, std::size_t b);
    static double dnv_site_logdiff(const Sampler& s, std::size_t t, int cand);
    // Analytic gradient/Hessian of the block target vs central differences;
    // returns the max absolute errors.
    static std::pair<double, double> block_derivative_errors(Sampler& s, std::size_t a,
                                                             std::size_t b);
};

ModelParams default_initial_params(const ObservedData& data, Variant variant);

ChainOutput run_chain(const ObservedData& data, Variant variant, const PriorConfig& prior,
                      const ChainConfig& cfg);

void write_chain_csv(const std::string& path, const ChainOutput& chain);
ChainOutput read_chain_csv(const std::string& path, Variant variant);
void write_acceptance_jsonl(const std::string& path, const ChainOutput& chain);

}  // namespace hsv
