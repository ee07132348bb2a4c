#include "lqgduet/strategies.hpp"

#include <cmath>

#include "lqgduet/lattice.hpp"

namespace lqgduet {

namespace {

void check_controller(int c) {
    if (c != 1 && c != 2) throw InvalidArgument("controller must be 1 or 2");
}

}  // namespace

void validate(const StrategySpec& spec) {
    if (const auto* s = std::get_if<LinBB>(&spec)) check_controller(s->controller);
    if (const auto* s = std::get_if<LinKal>(&spec)) {
        check_controller(s->controller);
        if (!std::isfinite(s->k)) throw InvalidArgument("LinKal gain k must be finite");
    }
    if (const auto* s = std::get_if<Sig>(&spec)) {
        if (s->s < 1) throw InvalidArgument("Sig stage s must be at least 1");
        if (!(s->d > 0) || !std::isfinite(s->d)) throw InvalidArgument("Sig step d must be positive");
    }
}

std::string strategy_label(const StrategySpec& spec) {
    struct V {
        std::string operator()(const ZeroInput&) const { return "zero"; }
        std::string operator()(const LinBB& s) const { return "linbb" + std::to_string(s.controller); }
        std::string operator()(const LinKal& s) const { return "linkal" + std::to_string(s.controller); }
        std::string operator()(const Sig&) const { return "sig"; }
    };
    return std::visit(V{}, spec);
}

SigState::SigState(int s) : u2_history(static_cast<std::size_t>(s < 1 ? 1 : s), 0.0) {}

double SigState::past(int i) const {
    const std::size_t n = u2_history.size();
    return u2_history[(head + n - static_cast<std::size_t>(i - 1)) % n];
}

void SigState::push(double u2) {
    head = (head + 1) % u2_history.size();
    u2_history[head] = u2;
}

Controls linbb_step(double a, int controller, double y) {
    check_controller(controller);
    const double u = -a * y;
    return controller == 1 ? Controls{u, 0.0} : Controls{0.0, u};
}

Controls sig_step(double a, int s, double d, double y1, double y2, SigState& state) {
    if (!(d > 0)) throw InvalidArgument("Sig step d must be positive");
    if (s < 1 || static_cast<std::size_t>(s) != state.u2_history.size())
        throw InvalidArgument("Sig state length must equal s");
    const double big = std::pow(std::fabs(a), s) * d;
    double acc = 0.0;
    for (int i = s; i >= 1; --i) acc = acc * a + state.past(i);
    const double m = remainder(big, acc);
    const double u1 = -a * remainder(d, y1);
    const double u2 = -a * (quantize(big, y2 - m) + m);
    state.push(u2);
    return Controls{u1, u2};
}

double kalman_step(double a, double k, double sigmav_sq, double y, KalmanState& state,
                   double u_prev) {
    if (!(sigmav_sq >= 0)) throw InvalidArgument("sigmav_sq must be nonnegative");
    double xm = state.xhat;
    double pm = state.p;
    if (state.started) {
        xm = a * state.xhat + u_prev;
        pm = a * a * state.p + 1.0;
    }
    const double denom = pm + sigmav_sq;
    const double g = denom > 0 ? pm / denom : 1.0;
    state.xhat = g == 1.0 ? y : xm + g * (y - xm);
    state.p = (1.0 - g) * pm;
    state.started = true;
    return -k * state.xhat;
}

double kalman_stationary_variance(double a, double sigmav_sq) {
    if (sigmav_sq == 0) return 0.0;
    // p solves a^2 p^2 + p (1 + sv - a^2 sv) - sv = 0 (positive root)
    const double a2 = a * a;
    const double b = 1.0 + sigmav_sq - a2 * sigmav_sq;
    return (-b + std::sqrt(b * b + 4.0 * a2 * sigmav_sq)) / (2.0 * a2);
}

double lqr_gain(double a, double q, double r) {
    if (!(q >= 0 && r >= 0)) throw InvalidArgument("lqr_gain needs q, r >= 0");
    if (r == 0) return a;
    const double b = q + (a * a - 1.0) * r;
    const double P = 0.5 * (b + std::sqrt(b * b + 4.0 * q * r));
    if (P == 0) return 0.0;
    return a * P / (P + r);
}

StrategyRunner::StrategyRunner(const StrategySpec& spec, const ProblemParams& p)
    : spec_(spec), a_(p.a), sigmav_sq_(0.0), sig_(1), kal_(KalmanState::prior(p.sigma0_sq)) {
    validate(spec_);
    if (const auto* s = std::get_if<Sig>(&spec_)) sig_ = SigState(s->s);
    if (const auto* s = std::get_if<LinKal>(&spec_))
        sigmav_sq_ = s->controller == 1 ? p.sigmav1_sq : p.sigmav2_sq;
}

Controls StrategyRunner::step(double y1, double y2) {
    switch (spec_.index()) {
        case 0:
            return Controls{};
        case 1: {
            const int c = std::get<LinBB>(spec_).controller;
            return linbb_step(a_, c, c == 1 ? y1 : y2);
        }
        case 2: {
            const auto& s = std::get<LinKal>(spec_);
            const double u = kalman_step(a_, s.k, sigmav_sq_, s.controller == 1 ? y1 : y2, kal_, u_prev_);
            u_prev_ = u;
            return s.controller == 1 ? Controls{u, 0.0} : Controls{0.0, u};
        }
        default: {
            const auto& s = std::get<Sig>(spec_);
            return sig_step(a_, s.s, s.d, y1, y2, sig_);
        }
    }
}

}  // namespace lqgduet
