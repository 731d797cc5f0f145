#pragma once

#include <cstdint>
#include <vector>

#include "hsv/data.hpp"
#include "hsv/measures.hpp"
#include "hsv/model.hpp"
#include "hsv/rng.hpp"

namespace hsv {

struct SimConfig {
    std::size_t days = 1;            // T
    std::size_t intraday_steps = 0;  // M per day; 0 = daily only, else >= 3
    std::uint64_t seed = 1;
    double annualization = 252.0;
    bool emit_intraday = false;
    ModelParams params;

    void validate() const;
};

struct SimResult {
    ObservedData data;
    LatentTruth truth;
    std::vector<IntradayDay> intraday;  // filled when emit_intraday
};

// Forward-simulate the discretized system at daily frequency. The intraday
// grids hold the variance constant within the day and inject the day's price
// jump (scaled to grid units) into one uniformly chosen substep, so that the
// measures pipeline recovers V_t and Zp_t after annualization; the grid's
// open-to-close return is not constrained to match r_t.
SimResult simulate(const SimConfig& config);

struct PredictiveStepState {
    double v_t = 0.0;      // V_T
    double r_t = 0.0;      // day-T observed return
    double zp_t = 0.0;     // day-T price jump size (0 if none)
    int dnp_t = 0;
    double zv_t = 0.0;     // day-T variance jump size
    int dnv_t = 0;
    double delta_p_next = 0.0;  // delta^p_{T+1} (recomputed internally for M5)
    double delta_v_next = 0.0;
};

struct PredictiveDraw {
    double r_next = 0.0;
    double v_next = 0.0;
    int dnp_next = 0;
    double zp_next = 0.0;
    double delta_p_next = 0.0;  // intensity actually used (M5 resolves on V_{T+1})
};

// One joint draw of (V_{T+1}, dNp_{T+1}, Zp_{T+1}, r_{T+1}) following the
// predictive factorization, marginal of the jump variables.
PredictiveDraw simulate_predictive_step(const ModelParams& params,
                                        const PredictiveStepState& state, Rng& rng);

}  // namespace hsv
