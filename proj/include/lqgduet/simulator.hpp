#pragma once

#include <cstdint>

#include "lqgduet/core.hpp"
#include "lqgduet/strategies.hpp"

namespace lqgduet {

struct SimConfig {
    long horizon = 200000;
    long burn_in = 1000;
    int trials = 32;
    std::uint64_t seed = 1;
    int workers = 0;  // 0 selects the hardware concurrency
    bool allow_stable_a = false;
};

struct SimResult {
    double avg_state_cost = 0.0;
    double avg_u1_power = 0.0;
    double avg_u2_power = 0.0;
    double weighted_cost = 0.0;
    double se_state = 0.0;
    double se_u1 = 0.0;
    double se_u2 = 0.0;
    double se_weighted = 0.0;
    bool unstable = false;
    long unstable_step = -1;
    int unstable_trial = -1;
};

struct TradeoffPoint {
    double D = kInf;
    double P1 = kInf;
    double P2 = kInf;
};

void validate(const SimConfig& cfg);

SimResult run(const ProblemParams& p, const StrategySpec& spec, const SimConfig& cfg);

TradeoffPoint tradeoff(const ProblemParams& p, const StrategySpec& spec, const SimConfig& cfg);

inline double weighted(const ProblemParams& p, const TradeoffPoint& t) {
    auto term = [](double w, double v) { return w == 0 ? 0.0 : w * v; };
    return term(p.q, t.D) + term(p.r1, t.P1) + term(p.r2, t.P2);
}

}  // namespace lqgduet
