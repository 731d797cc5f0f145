#include "hsv/sampler.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hsv/common.hpp"
#include "hsv/csv.hpp"
#include "hsv/stats.hpp"

namespace hsv {

namespace {

inline double tune_rate(std::size_t step) {
    return std::min(0.5, 3.0 / std::sqrt(static_cast<double>(step) + 1.0));
}

}  // namespace

// ---------------------------------------------------------------------------
// Proposal distributions
// ---------------------------------------------------------------------------

namespace {

struct ProposalDist {
    virtual ~ProposalDist() = default;
    virtual std::vector<double> draw(Rng& rng) const = 0;
    virtual double logpdf(const std::vector<double>& x) const = 0;
};

// Independent Gaussians per coordinate (random walks, conditional conjugates).
struct GaussianProposal : ProposalDist {
    std::vector<double> mean, sd;
    std::vector<double> draw(Rng& rng) const override {
        std::vector<double> x(mean.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = mean[i] + sd[i] * rng.normal();
        return x;
    }
    double logpdf(const std::vector<double>& x) const override {
        double lp = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) lp += normal_logpdf(x[i], mean[i], sd[i]);
        return lp;
    }
};

// Correlated bivariate Gaussian given precision A and target mean.
struct Gaussian2Proposal : ProposalDist {
    Eigen::Vector2d mean;
    Eigen::Matrix2d prec;
    Eigen::LLT<Eigen::Matrix2d> llt;
    void finalize() { llt.compute(prec); }
    std::vector<double> draw(Rng& rng) const override {
        Eigen::Vector2d z(rng.normal(), rng.normal());
        Eigen::Vector2d x = mean + llt.matrixU().solve(z);
        return {x[0], x[1]};
    }
    double logpdf(const std::vector<double>& xv) const override {
        Eigen::Vector2d d(xv[0] - mean[0], xv[1] - mean[1]);
        const double quad = d.dot(prec * d);
        const double logdet = 2.0 * std::log(llt.matrixLLT()(0, 0)) +
                              2.0 * std::log(llt.matrixLLT()(1, 1));
        return 0.5 * logdet - kLogTwoPi - 0.5 * quad;
    }
};

struct UniformBoxProposal : ProposalDist {
    std::vector<double> lo, hi;
    std::vector<double> draw(Rng& rng) const override {
        std::vector<double> x(lo.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
        return x;
    }
    double logpdf(const std::vector<double>& x) const override {
        double lp = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(x[i] > lo[i] && x[i] < hi[i])) return neg_inf();
            lp -= std::log(hi[i] - lo[i]);
        }
        return lp;
    }
};

struct InvGammaProposal : ProposalDist {
    double shape = 1.0, scale = 1.0;
    std::vector<double> draw(Rng& rng) const override {
        return {rng.inv_gamma(shape, scale)};
    }
    double logpdf(const std::vector<double>& x) const override {
        return inv_gamma_logpdf(x[0], shape, scale);
    }
};

struct BetaProposal : ProposalDist {
    double a = 1.0, b = 1.0;
    std::vector<double> draw(Rng& rng) const override { return {rng.beta(a, b)}; }
    double logpdf(const std::vector<double>& x) const override {
        return beta_logpdf(x[0], a, b);
    }
};

// Beta candidate on the unit-mapped support (lo, lo + width); the 1/width
// Jacobian is part of the density since the support moves with the state.
struct BetaMappedProposal : ProposalDist {
    double lo = 0.0, width = 1.0, a = 1.0, b = 1.0;
    std::vector<double> draw(Rng& rng) const override {
        return {lo + width * rng.beta(a, b)};
    }
    double logpdf(const std::vector<double>& x) const override {
        const double f = (x[0] - lo) / width;
        if (!(f > 0.0 && f < 1.0)) return neg_inf();
        return beta_logpdf(f, a, b) - std::log(width);
    }
};

// (psi, omega) normal-inverse-gamma block.
struct NigProposal : ProposalDist {
    double psi_n = 0.0, k_n = 1.0, a_n = 1.0, b_n = 1.0;
    std::vector<double> draw(Rng& rng) const override {
        const double omega = rng.inv_gamma(a_n, b_n);
        const double psi = psi_n + std::sqrt(omega / k_n) * rng.normal();
        return {psi, omega};
    }
    double logpdf(const std::vector<double>& x) const override {
        const double psi = x[0], omega = x[1];
        if (!(omega > 0.0)) return neg_inf();
        return inv_gamma_logpdf(omega, a_n, b_n) +
               normal_logpdf(psi, psi_n, std::sqrt(omega / k_n));
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// Static parameter updaters
// ---------------------------------------------------------------------------

class StaticUpdater {
  public:
    StaticUpdater(std::string name, std::vector<std::string> params, bool tuned)
        : name_(std::move(name)), params_(std::move(params)), tuned_(tuned) {}
    virtual ~StaticUpdater() = default;

    const std::string& name() const { return name_; }
    const std::vector<std::string>& params() const { return params_; }
    bool tuned() const { return tuned_; }

    virtual std::vector<double> get_values(const Sampler& s) const = 0;
    virtual void set_values(Sampler& s, const std::vector<double>& v) const = 0;
    virtual std::unique_ptr<ProposalDist> make_proposal(Sampler& s) = 0;
    virtual void tune(bool accepted, std::size_t step) { (void)accepted, (void)step; }
    virtual double scale() const { return 0.0; }

    bool mh_update(Sampler& s, Rng& rng);
    double cj_numerator(Sampler& s, const std::vector<double>& star, Rng& rng);
    double cj_denominator(Sampler& s, Rng& rng);

    AcceptanceRecord record_;

  private:
    std::string name_;
    std::vector<std::string> params_;
    bool tuned_;
};

bool StaticUpdater::mh_update(Sampler& s, Rng& rng) {
    const std::vector<double> cur = get_values(s);
    const double cur_target = s.log_target();
    auto qf = make_proposal(s);
    const std::vector<double> cand = qf->draw(rng);
    const double lq_f = qf->logpdf(cand);
    set_values(s, cand);
    const double cand_target = s.log_target();
    bool accept = false;
    if (std::isfinite(cand_target) && std::isfinite(lq_f)) {
        auto qr = make_proposal(s);
        const double lq_r = qr->logpdf(cur);
        const double log_ratio = cand_target - cur_target + lq_r - lq_f;
        accept = std::log(rng.uniform()) < log_ratio;
    }
    if (!accept) set_values(s, cur);
    ++record_.proposals;
    if (accept) ++record_.accepts;
    return accept;
}

double StaticUpdater::cj_numerator(Sampler& s, const std::vector<double>& star, Rng&) {
    const std::vector<double> cur = get_values(s);
    const double cur_target = s.log_target();
    auto qf = make_proposal(s);
    const double lq_star = qf->logpdf(star);
    if (!std::isfinite(lq_star)) return neg_inf();
    set_values(s, star);
    const double star_target = s.log_target();
    double result = neg_inf();
    if (std::isfinite(star_target)) {
        auto qr = make_proposal(s);
        const double lq_back = qr->logpdf(cur);
        const double lalpha = std::min(0.0, star_target - cur_target + lq_back - lq_star);
        result = lalpha + lq_star;
    }
    set_values(s, cur);
    return result;
}

double StaticUpdater::cj_denominator(Sampler& s, Rng& rng) {
    const std::vector<double> star = get_values(s);
    const double star_target = s.log_target();
    auto q = make_proposal(s);
    const std::vector<double> cand = q->draw(rng);
    const double lq_c = q->logpdf(cand);
    set_values(s, cand);
    const double cand_target = s.log_target();
    double lalpha = neg_inf();
    if (std::isfinite(cand_target) && std::isfinite(lq_c)) {
        auto qr = make_proposal(s);
        const double lq_back = qr->logpdf(star);
        lalpha = std::min(0.0, cand_target - star_target + lq_back - lq_c);
    }
    set_values(s, star);
    return lalpha;
}

namespace {

// Value accessors shared by the concrete updaters.

void apply_params(Sampler& s, const std::vector<std::string>& names,
                  const std::vector<double>& v) {
    for (std::size_t i = 0; i < names.size(); ++i) s.mutable_params().set(names[i], v[i]);
    s.refresh_derived_state();
}

std::vector<double> read_params(const Sampler& s, const std::vector<std::string>& names) {
    std::vector<double> v(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) v[i] = s.params().get(names[i]);
    return v;
}

// Weighted-regression sufficient statistics for the return drift pair
// (mu, gamma): the return measurement rows plus the leverage rows of the
// variance transition.
struct DriftStats {
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
};

DriftStats drift_stats(const Sampler& s) {
    DriftStats st;
    const ObservedData& d = s.data();
    const LatentState& l = s.latents();
    const ModelParams& p = s.params();
    const double lam = s.config().likelihood_scale;
    const double psi = p.psi(), omega = p.omega();
    const std::size_t T = d.size();
    for (std::size_t t = 0; t < T; ++t) {
        const double v = l.v[t];
        const double jump = p.models_price_jumps() ? d.zp[t] * d.dnp[t] : 0.0;
        const double y = d.r[t] - jump;
        Eigen::Vector2d x(1.0, v);
        st.A += lam * x * x.transpose() / v;
        st.b += lam * y * x / v;
        if (t + 1 < T) {
            const double jv = p.models_variance_jumps() ? l.zv[t] * l.dnv[t] : 0.0;
            const double e = l.v[t + 1] - p.kappa * p.theta - (1.0 - p.kappa) * v - jv -
                             psi * (d.r[t] - jump);
            Eigen::Vector2d x2(-psi, -psi * v);
            st.A += lam * x2 * x2.transpose() / (omega * v);
            st.b += lam * e * x2 / (omega * v);
        }
    }
    return st;
}

// Jump-size regression rows (mu_p, gamma_p) over jump days.
DriftStats jump_size_stats(const Sampler& s) {
    DriftStats st;
    const ObservedData& d = s.data();
    const LatentState& l = s.latents();
    const ModelParams& p = s.params();
    const double lam = s.config().likelihood_scale;
    const double w = p.sigma_p * p.sigma_p;
    for (std::size_t t = 0; t < d.size(); ++t) {
        if (d.dnp[t] != 1) continue;
        Eigen::Vector2d x(1.0, l.v[t]);
        st.A += lam * x * x.transpose() / w;
        st.b += lam * d.zp[t] * x / w;
    }
    return st;
}

// Scalar conditional draw from a bivariate Gaussian in precision form.
struct ScalarConditional {
    double mean = 0.0, sd = 0.0;
    bool proper = false;
};

ScalarConditional conditional_1d(const DriftStats& st, int which, double other_value) {
    ScalarConditional c;
    const int o = 1 - which;
    const double a_ii = st.A(which, which);
    if (a_ii <= 0.0) return c;
    c.mean = (st.b(which) - st.A(which, o) * other_value) / a_ii;
    c.sd = std::sqrt(1.0 / a_ii);
    c.proper = true;
    return c;
}

// Scalar conjugate regression updater: mu, gamma, mu_p or gamma_p given its
// partner, falling back to the uniform prior when data carry no information.
class RegressionScalarUpdater : public StaticUpdater {
  public:
    enum class Role { Mu, Gamma, MuP, GammaP };
    RegressionScalarUpdater(Role role, std::string name, double lo, double hi)
        : StaticUpdater(std::move(name), {name_for(role)}, false),
          role_(role), lo_(lo), hi_(hi) {}

    static std::string name_for(Role r) {
        switch (r) {
            case Role::Mu: return "mu";
            case Role::Gamma: return "gamma";
            case Role::MuP: return "mu_p";
            case Role::GammaP: return "gamma_p";
        }
        return {};
    }

    std::vector<double> get_values(const Sampler& s) const override {
        return read_params(s, params());
    }
    void set_values(Sampler& s, const std::vector<double>& v) const override {
        apply_params(s, params(), v);
    }
    std::unique_ptr<ProposalDist> make_proposal(Sampler& s) override {
        const ModelParams& p = s.params();
        const bool drift = (role_ == Role::Mu || role_ == Role::Gamma);
        const DriftStats st = drift ? drift_stats(s) : jump_size_stats(s);
        const int which = (role_ == Role::Mu || role_ == Role::MuP) ? 0 : 1;
        const double other = drift ? (which == 0 ? p.gamma : p.mu)
                                   : (which == 0 ? p.gamma_p : p.mu_p);
        const ScalarConditional c = conditional_1d(st, which, other);
        if (!c.proper) {
            auto u = std::make_unique<UniformBoxProposal>();
            u->lo = {lo_};
            u->hi = {hi_};
            return u;
        }
        auto g = std::make_unique<GaussianProposal>();
        g->mean = {c.mean};
        g->sd = {c.sd};
        return g;
    }

  private:
    Role role_;
    double lo_, hi_;
};

class SigmaBv2Updater : public StaticUpdater {
  public:
    SigmaBv2Updater() : StaticUpdater("sigma_bv2", {"sigma_bv"}, false) {}
    std::vector<double> get_values(const Sampler& s) const override {
        return {s.params().sigma_bv * s.params().sigma_bv};
    }
    void set_values(Sampler& s, const std::vector<double>& v) const override {
        s.mutable_params().sigma_bv = v[0] > 0.0 ? std::sqrt(v[0]) : -1.0;
        s.refresh_derived_state();
    }
    std::unique_ptr<ProposalDist> make_proposal(Sampler& s) override {
        const double lam = s.config().likelihood_scale;
        double ssr = 0.0;
        for (std::size_t t = 0; t < s.data().size(); ++t) {
            const double e = s.data().lnbv[t] - std::log(s.latents().v[t]);
            ssr += e * e;
        }
        auto q = std::make_unique<InvGammaProposal>();
        q->shape = s.prior().sigma_bv2_shape + 0.5 * lam * static_cast<double>(s.data().size());
        q->scale = s.prior().sigma_bv2_scale + 0.5 * lam * ssr;
        return q;
    }
};

class SigmaP2Updater : public StaticUpdater {
  public:
    SigmaP2Updater() : StaticUpdater("sigma_p2", {"sigma_p"}, false) {}
    std::vector<double> get_values(const Sampler& s) const override {
        return {s.params().sigma_p * s.params().sigma_p};
    }
    void set_values(Sampler& s, const std::vector<double>& v) const override {
        s.mutable_params().sigma_p = v[0] > 0.0 ? std::sqrt(v[0]) : -1.0;
        s.refresh_derived_state();
    }
    std::unique_ptr<ProposalDist> make_proposal(Sampler& s) override {
        const ModelParams& p = s.params();
        const double lam = s.config().likelihood_scale;
        double ssr = 0.0, n = 0.0;
        for (std::size_t t = 0; t < s.data().size(); ++t) {
            if (s.data().dnp[t] != 1) continue;
            const double e = s.data().zp[t] - p.mu_p - p.gamma_p * s.latents().v[t];
            ssr += e * e;
            n += 1.0;
        }
        auto q = std::make_unique<InvGammaProposal>();
        q->shape = s.prior().sigma_p2_shape + 0.5 * lam * n;
        q->scale = s.prior().sigma_p2_scale + 0.5 * lam * ssr;
        return q;
    }
};

class MuVUpdater : public StaticUpdater {
  public:
    MuVUpdater() : StaticUpdater("mu_v", {"mu_v"}, false) {}
    std::vector<double> get_values(const Sampler& s) const override {
        return {s.params().mu_v};
    }
    void set_values(Sampler& s, const std::vector<double>& v) const override {
        apply_params(s, params(), v);
    }
    std::unique_ptr<ProposalDist> make_proposal(Sampler& s) override {
        const double lam = s.config().likelihood_scale;
        double sum = 0.0;
        for (double z : s.latents().zv) sum += z;
        auto q = std::make_unique<InvGammaProposal>();
        q->shape = s.prior().mu_v_shape + lam * static_cast<double>(s.latents().zv.size());
        q->scale = s.prior().mu_v_scale + lam * sum;
        return q;
    }
};

class Delta0Updater : public StaticUpdater {
  public:
    Delta0Updater(bool price)
        : StaticUpdater(price ? "delta0_p" : "delta0_v", {price ? "delta0_p" : "delta0_v"},
                        false),
          price_(price) {}
    std::vector<double> get_values(const Sampler& s) const override {
        return {price_ ? s.params().delta0_p : s.params().delta0_v};
    }
    void set_values(Sampler& s, const std::vector<double>& v) const override {
        apply_params(s, params(), v);
    }
    std::unique_ptr<ProposalDist> make_proposal(Sampler& s) override {
        const double lam = s.config().likelihood_scale;
        double ones = 0.0;
        const std::size_t T = s.data().size();
        if (price_) {
            for (int d : s.data().dnp) ones += d;
        } else {
            for (int d : s.latents().dnv) ones += d;
        }
        auto q = std::make_unique<BetaProposal>();
        q->a = s.prior().delta0_a + lam * ones;
        q->b = s.prior().delta0_b + lam * (static_cast<double>(T) - ones);
        return q;
    }

  private:
    bool price_;
};

class PsiOmegaUpdater : public StaticUpdater {
  public:
    PsiOmegaUpdater() : StaticUpdater("psi_omega", {"sigma_v", "rho"}, false) {}
    std::vector<double> get_values(const Sampler& s) const override {
        return {s.params().psi(), s.params().omega()};
    }
    void set_values(Sampler& s, const std::vector<double>& v) const override {
        if (v[1] > 0.0) {
            s.mutable_params().set_psi_omega(v[0], v[1]);
        } else {
            s.mutable_params().sigma_v = -1.0;  // rejected by validity
        }
        s.refresh_derived_state();
    }
    std::unique_ptr<ProposalDist> make_proposal(Sampler& s) override {
        const ObservedData& d = s.data();
        const LatentState& l = s.latents();
        const ModelParams& p = s.params();
        const PriorConfig& c = s.prior();
        const double lam = s.config().likelihood_scale;
        double sw2 = 0.0, swe = 0.0, se2 = 0.0, n = 0.0;
        for (std::size_t t = 0; t + 1 < d.size(); ++t) {
            const double v = l.v[t];
            const double jump = p.models_price_jumps() ? d.zp[t] * d.dnp[t] : 0.0;
            const double jv = p.models_variance_jumps() ? l.zv[t] * l.dnv[t] : 0.0;
            const double w = d.r[t] - jump - p.mu - p.gamma * v;
            const double e = l.v[t + 1] - p.kappa * p.theta - (1.0 - p.kappa) * v - jv;
            sw2 += w * w / v;
            swe += w * e / v;
            se2 += e * e / v;
            n += 1.0;
        }
        auto q = std::make_unique<NigProposal>();
        q->k_n = c.psi_k + lam * sw2;
        q->psi_n = (c.psi_k * c.psi_mean + lam * swe) / q->k_n;
        q->a_n = c.omega_shape + 0.5 * lam * n;
        q->b_n = c.omega_scale + 0.5 * (lam * se2 + c.psi_k * c.psi_mean * c.psi_mean -
                                        q->k_n * q->psi_n * q->psi_n);
        q->b_n = std::max(q->b_n, 1e-12);
        return q;
    }
};

class RwScalarUpdater : public StaticUpdater {
  public:
    RwScalarUpdater(std::string name, double base_step)
        : StaticUpdater(name, {name}, true), base_step_(base_step) {}
    std::vector<double> get_values(const Sampler& s) const override {
        return read_params(s, params());
    }
    void set_values(Sampler& s, const std::vector<double>& v) const override {
        apply_params(s, params(), v);
    }
    std::unique_ptr<ProposalDist> make_proposal(Sampler& s) override {
        auto g = std::make_unique<GaussianProposal>();
        g->mean = get_values(s);
        g->sd = {base_step_ * scale_};
        return g;
    }
    void tune(bool accepted, std::size_t step) override {
        const double target = 0.25;
        scale_ = std::clamp(
            scale_ * std::exp(tune_rate(step) * ((accepted ? 1.0 : 0.0) - target)), 1e-4, 1e4);
    }
    double scale() const override { return scale_; }

  private:
    double base_step_;
    double scale_ = 1.0;
};

// Intensity-dynamics parameters: beta candidates on the restriction-mapped
// unit interval; the support bounds depend on the other parameters.
class IntensityMhUpdater : public StaticUpdater {
  public:
    using BoundsFn = std::pair<double, double> (*)(const ModelParams&);
    IntensityMhUpdater(std::string name, BoundsFn bounds)
        : StaticUpdater(name, {name}, true), bounds_(bounds) {}

    std::vector<double> get_values(const Sampler& s) const override {
        return read_params(s, params());
    }
    void set_values(Sampler& s, const std::vector<double>& v) const override {
        apply_params(s, params(), v);
    }
    std::unique_ptr<ProposalDist> make_proposal(Sampler& s) override {
        const auto [lo, hi] = bounds_(s.params());
        auto q = std::make_unique<BetaMappedProposal>();
        q->lo = lo;
        q->width = std::max(hi - lo, 1e-12);
        const double cur = s.params().get(params()[0]);
        const double f = std::clamp((cur - lo) / q->width, 1e-6, 1.0 - 1e-6);
        q->a = conc_ * f + 0.5;
        q->b = conc_ * (1.0 - f) + 0.5;
        return q;
    }
    void tune(bool accepted, std::size_t step) override {
        const double target = 0.25;
        conc_ = std::clamp(
            conc_ * std::exp(-tune_rate(step) * ((accepted ? 1.0 : 0.0) - target)), 2.0, 1e7);
    }
    double scale() const override { return conc_; }

  private:
    BoundsFn bounds_;
    double conc_ = 60.0;
};

std::pair<double, double> bounds_alpha_p(const ModelParams& p) {
    if (p.variant == Variant::M5) return {0.0, p.delta0_p / p.v_bar()};
    return {p.beta_pp, 1.0};
}
std::pair<double, double> bounds_beta_pp(const ModelParams& p) { return {0.0, p.alpha_p}; }
std::pair<double, double> bounds_alpha_v(const ModelParams& p) {
    if (p.variant == Variant::M5) return {0.0, p.delta0_v / p.v_bar()};
    return {p.beta_vv, 1.0};
}
std::pair<double, double> bounds_beta_vv(const ModelParams& p) { return {0.0, p.alpha_v}; }
std::pair<double, double> bounds_beta_vp(const ModelParams& p) {
    const double f = f_zp_at_zero_stationary(p);
    const double headroom =
        p.delta0_v * (p.alpha_v - p.beta_vv) / p.delta0_p - p.beta_vp_neg * f;
    return {0.0, std::clamp(headroom, 1e-10, 1.0)};
}
std::pair<double, double> bounds_beta_vp_neg(const ModelParams& p) {
    const double f = std::max(f_zp_at_zero_stationary(p), 1e-10);
    const double headroom =
        (p.delta0_v * (p.alpha_v - p.beta_vv) / p.delta0_p - p.beta_vp) / f;
    return {0.0, std::clamp(headroom, 1e-10, 1.0)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Sampler
// ---------------------------------------------------------------------------

Sampler::Sampler(const ObservedData& data, const ModelParams& init, const PriorConfig& prior,
                 const ChainConfig& cfg)
    : data_(data), params_(init), prior_(prior), cfg_(cfg) {
    data_.validate();
    if (const auto why = params_.invalid_reason())
        throw InputError("sampler: invalid initial parameters: " + *why);
    if (cfg_.likelihood_scale != 0.0 && cfg_.likelihood_scale != 1.0)
        throw InputError("sampler: likelihood_scale must be 0 or 1");
    latents_ = make_initial_latents(params_, data_);
    v_accept_.name = "v_blocks";
    v_accept_.tuned = true;
    build_updaters();
}

Sampler::~Sampler() = default;

void Sampler::build_updaters() {
    const ModelParams& p = params_;
    const PriorConfig& c = prior_;
    using R = RegressionScalarUpdater::Role;

    // Sweep order groups the sub-blocks in the order the marginal-likelihood
    // decomposition conditions on them.
    updaters_.push_back(std::make_unique<SigmaBv2Updater>());
    if (p.models_variance_jumps()) updaters_.push_back(std::make_unique<MuVUpdater>());
    if (p.models_price_jumps()) updaters_.push_back(std::make_unique<Delta0Updater>(true));
    if (p.has_delta0_v()) updaters_.push_back(std::make_unique<Delta0Updater>(false));
    updaters_.push_back(std::make_unique<PsiOmegaUpdater>());
    if (p.models_price_jumps())
        updaters_.push_back(
            std::make_unique<RegressionScalarUpdater>(R::MuP, "mu_p", c.mu_p_lo, c.mu_p_hi));
    if (p.hawkes_p() || p.variant == Variant::M5)
        updaters_.push_back(std::make_unique<IntensityMhUpdater>("alpha_p", bounds_alpha_p));
    if (p.hawkes_v() || p.variant == Variant::M5)
        updaters_.push_back(std::make_unique<IntensityMhUpdater>("alpha_v", bounds_alpha_v));
    updaters_.push_back(std::make_unique<RwScalarUpdater>("kappa", 0.1 * params_.kappa));
    if (p.models_price_jumps())
        updaters_.push_back(std::make_unique<RegressionScalarUpdater>(R::GammaP, "gamma_p",
                                                                      c.gamma_p_lo, c.gamma_p_hi));
    if (p.hawkes_p())
        updaters_.push_back(std::make_unique<IntensityMhUpdater>("beta_pp", bounds_beta_pp));
    if (p.hawkes_v())
        updaters_.push_back(std::make_unique<IntensityMhUpdater>("beta_vv", bounds_beta_vv));
    updaters_.push_back(std::make_unique<RwScalarUpdater>("theta", 0.1 * params_.theta));
    if (p.models_price_jumps()) updaters_.push_back(std::make_unique<SigmaP2Updater>());
    if (p.has_beta_vp())
        updaters_.push_back(std::make_unique<IntensityMhUpdater>("beta_vp", bounds_beta_vp));
    updaters_.push_back(
        std::make_unique<RegressionScalarUpdater>(R::Mu, "mu", c.mu_lo, c.mu_hi));
    if (p.has_beta_vp_neg())
        updaters_.push_back(
            std::make_unique<IntensityMhUpdater>("beta_vp_neg", bounds_beta_vp_neg));
    updaters_.push_back(
        std::make_unique<RegressionScalarUpdater>(R::Gamma, "gamma", c.gamma_lo, c.gamma_hi));

    for (auto& u : updaters_) {
        u->record_.name = u->name();
        u->record_.tuned = u->tuned();
    }
}

double Sampler::log_target() {
    if (!target_valid_) {
        LogPosteriorOptions opts;
        opts.likelihood_scale = cfg_.likelihood_scale;
        cached_target_ = complete_data_logposterior(params_, latents_, data_, prior_, opts);
        target_valid_ = true;
    }
    return cached_target_;
}

void Sampler::invalidate_target() { target_valid_ = false; }

void Sampler::refresh_derived_state() {
    latents_.v[0] = params_.valid() ? params_.v_bar() : latents_.v[0];
    if (params_.valid()) refresh_intensity_paths(params_, data_, latents_);
    target_valid_ = false;
}

std::vector<Sampler::UpdaterInfo> Sampler::updater_infos() const {
    std::vector<UpdaterInfo> out;
    for (const auto& u : updaters_)
        out.push_back({u->name(), u->params(), u->tuned()});
    return out;
}

std::vector<double> Sampler::updater_values(std::size_t idx) const {
    return updaters_.at(idx)->get_values(*this);
}

double Sampler::cj_numerator_term(std::size_t idx, const std::vector<double>& star, Rng& rng) {
    return updaters_.at(idx)->cj_numerator(*this, star, rng);
}

double Sampler::cj_denominator_term(std::size_t idx, Rng& rng) {
    return updaters_.at(idx)->cj_denominator(*this, rng);
}

std::vector<AcceptanceRecord> Sampler::acceptance() const {
    std::vector<AcceptanceRecord> out;
    AcceptanceRecord v = v_accept_;
    v.scale = v_block_scale_;
    out.push_back(v);
    for (const auto& u : updaters_) {
        AcceptanceRecord r = u->record_;
        r.scale = u->scale();
        out.push_back(r);
    }
    return out;
}

void Sampler::reset_acceptance() {
    v_accept_.proposals = v_accept_.accepts = 0;
    v_sweep_updates_ = v_sweeps_ = 0;
    for (auto& u : updaters_) u->record_.proposals = u->record_.accepts = 0;
}

void Sampler::sample_static_params(Rng& rng) {
    for (auto& u : updaters_) {
        bool pinned = false;
        for (const auto& name : u->params()) pinned = pinned || is_pinned(name);
        if (pinned) continue;
        const bool accepted = u->mh_update(*this, rng);
        if (tuning_ && u->tuned()) u->tune(accepted, ++tune_steps_);
    }
}

void Sampler::sweep(Rng& rng) {
    if (cfg_.likelihood_scale != 0.0) {
        sample_volatility(rng);
        sample_variance_jump_occurrences(rng);
        sample_variance_jump_sizes(rng);
    }
    sample_static_params(rng);
    if (!std::isfinite(log_target()))
        throw NumericError("sampler: non-finite posterior after sweep; state:\n" +
                           params_.serialize());
}

void Sampler::sample_volatility(Rng& rng) { sample_volatility_range(rng, 1); }

void Sampler::sample_variance_jump_occurrences(Rng& rng) { sample_dnv_range(rng, 1); }

void Sampler::sample_variance_jump_sizes(Rng& rng) { sample_zv_range(rng, 0); }

void Sampler::sweep_latents_tail(Rng& rng, std::size_t t_lo) {
    sample_volatility_range(rng, std::max<std::size_t>(t_lo, 1));
    sample_dnv_range(rng, std::max<std::size_t>(t_lo, 1));
    sample_zv_range(rng, t_lo);
}

}  // namespace hsv
