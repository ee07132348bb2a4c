#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "lqgduet/core.hpp"

namespace lqgduet {

struct ZeroInput {};
struct LinBB {
    int controller = 1;
};
struct LinKal {
    int controller = 1;
    double k = 0.0;
};
struct Sig {
    int s = 1;
    double d = 1.0;
};

using StrategySpec = std::variant<ZeroInput, LinBB, LinKal, Sig>;

void validate(const StrategySpec& spec);
std::string strategy_label(const StrategySpec& spec);

struct Controls {
    double u1 = 0.0;
    double u2 = 0.0;
};

struct SigState {
    std::vector<double> u2_history;  // ring buffer, newest at head
    std::size_t head = 0;

    explicit SigState(int s = 1);
    // u2[n - i] for 1 <= i <= s
    double past(int i) const;
    void push(double u2);
};

struct KalmanState {
    double xhat = 0.0;
    double p = 0.0;
    bool started = false;

    static KalmanState prior(double sigma0_sq) { return KalmanState{0.0, sigma0_sq, false}; }
};

Controls linbb_step(double a, int controller, double y);

Controls sig_step(double a, int s, double d, double y1, double y2, SigState& state);

// Returns the active controller's input; state is advanced in place.
double kalman_step(double a, double k, double sigmav_sq, double y, KalmanState& state,
                   double u_prev);

// Stationary conditional variance of the scalar filter.
double kalman_stationary_variance(double a, double sigmav_sq);

// Optimal state-feedback gain for cost q x^2 + r u^2 with x' = a x + u + w.
double lqr_gain(double a, double q, double r);

class StrategyRunner {
public:
    StrategyRunner(const StrategySpec& spec, const ProblemParams& p);
    Controls step(double y1, double y2);

private:
    StrategySpec spec_;
    double a_;
    double sigmav_sq_;
    SigState sig_;
    KalmanState kal_;
    double u_prev_ = 0.0;
};

}  // namespace lqgduet
