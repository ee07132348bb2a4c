#include "lqgduet/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "lqgduet/rng.hpp"

namespace lqgduet {

namespace {

struct TrialStats {
    double x2 = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;
    bool unstable = false;
    long step = -1;
};

constexpr double kDivergence = 1e150;

TrialStats run_trial(const ProblemParams& p, const StrategySpec& spec, const SimConfig& cfg,
                     std::uint32_t trial) {
    StrategyRunner ctrl(spec, p);
    const double s0 = std::sqrt(p.sigma0_sq);
    const double s1 = std::sqrt(p.sigmav1_sq);
    const double s2 = std::sqrt(p.sigmav2_sq);
    double x = s0 * gaussian_pair(cfg.seed, trial, 0, 2).first;
    double sx = 0.0, su1 = 0.0, su2 = 0.0;
    TrialStats out;
    for (long n = 0; n < cfg.horizon; ++n) {
        const auto [w, v1] = gaussian_pair(cfg.seed, trial, static_cast<std::uint64_t>(n), 0);
        const double v2 = gaussian_pair(cfg.seed, trial, static_cast<std::uint64_t>(n), 1).first;
        const Controls u = ctrl.step(x + s1 * v1, x + s2 * v2);
        if (n >= cfg.burn_in) {
            sx += x * x;
            su1 += u.u1 * u.u1;
            su2 += u.u2 * u.u2;
        }
        x = p.a * x + u.u1 + u.u2 + w;
        if (!(std::fabs(x) <= kDivergence)) {
            out.unstable = true;
            out.step = n + 1;
            return out;
        }
    }
    const double count = static_cast<double>(cfg.horizon - cfg.burn_in);
    out.x2 = sx / count;
    out.u1 = su1 / count;
    out.u2 = su2 / count;
    return out;
}

void mean_se(const std::vector<double>& v, double& mean, double& se) {
    const double n = static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += x;
    mean = s / n;
    if (v.size() < 2) {
        se = 0.0;
        return;
    }
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace

void validate(const SimConfig& cfg) {
    if (cfg.burn_in < 0) throw InvalidArgument("burn_in must be nonnegative");
    if (cfg.horizon <= cfg.burn_in) throw InvalidArgument("horizon must exceed burn_in");
    if (cfg.trials < 1) throw InvalidArgument("trials must be at least 1");
    if (cfg.workers < 0) throw InvalidArgument("workers must be nonnegative");
}

SimResult run(const ProblemParams& p, const StrategySpec& spec, const SimConfig& cfg) {
    validate(p);
    validate(spec);
    validate(cfg);
    if (!cfg.allow_stable_a && !(std::fabs(p.a) > 1))
        throw InvalidArgument("|a| <= 1 requires the diagnostic allow_stable_a flag");

    std::vector<TrialStats> stats(static_cast<std::size_t>(cfg.trials));
    int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, cfg.trials);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int t = next++; t < cfg.trials; t = next++)
            stats[static_cast<std::size_t>(t)] = run_trial(p, spec, cfg, static_cast<std::uint32_t>(t));
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    }

    SimResult r;
    for (int t = 0; t < cfg.trials; ++t) {
        const auto& s = stats[static_cast<std::size_t>(t)];
        if (s.unstable && (!r.unstable || s.step < r.unstable_step)) {
            r.unstable = true;
            r.unstable_step = s.step;
            r.unstable_trial = t;
        }
    }
    if (r.unstable) {
        r.avg_state_cost = r.avg_u1_power = r.avg_u2_power = r.weighted_cost = kInf;
        r.se_state = r.se_u1 = r.se_u2 = r.se_weighted = kInf;
        return r;
    }
    std::vector<double> xs, u1s, u2s, ws;
    for (const auto& s : stats) {
        xs.push_back(s.x2);
        u1s.push_back(s.u1);
        u2s.push_back(s.u2);
        ws.push_back(p.q * s.x2 + p.r1 * s.u1 + p.r2 * s.u2);
    }
    mean_se(xs, r.avg_state_cost, r.se_state);
    mean_se(u1s, r.avg_u1_power, r.se_u1);
    mean_se(u2s, r.avg_u2_power, r.se_u2);
    double ignored = 0.0;
    mean_se(ws, ignored, r.se_weighted);
    r.weighted_cost = p.q * r.avg_state_cost + p.r1 * r.avg_u1_power + p.r2 * r.avg_u2_power;
    return r;
}

TradeoffPoint tradeoff(const ProblemParams& p, const StrategySpec& spec, const SimConfig& cfg) {
    const SimResult r = run(p, spec, cfg);
    if (r.unstable) return TradeoffPoint{};
    return TradeoffPoint{r.avg_state_cost, r.avg_u1_power, r.avg_u2_power};
}

}  // namespace lqgduet
