#include "lqgduet/bounds_upper.hpp"

#include <algorithm>
#include <cmath>

namespace lqgduet {

double sig_box_width(double a, const SigDesign& g) {
    const double aa = std::fabs(a);
    return std::pow(aa, g.s - 1) * g.d * aa / (aa - 1.0) + g.w1;
}

void check_feasible(double a, const SigDesign& g) {
    const double aa = std::fabs(a);
    if (!(aa > 1)) throw InvalidArgument("signaling design needs |a| > 1");
    if (g.s < 1) throw InvalidArgument("signaling design needs s >= 1");
    if (!(g.d > 0)) throw InvalidArgument("infeasible design: d > 0 violated");
    if (!(g.w1 > 0)) throw InvalidArgument("infeasible design: w1 > 0 violated");
    if (!(std::pow(aa, g.s) * g.d - sig_box_width(a, g) > 0))
        throw InvalidArgument("infeasible design: |a|^s d - (|a|^(s-1) d |a|/(|a|-1) + w1) > 0 violated");
}

TradeoffPoint du1(const ProblemParams& p, const SigDesign& g, const SeriesOptions& opt) {
    check_feasible(p.a, g);
    const double a = std::fabs(p.a);
    const double a2 = a * a;
    const int s = g.s;
    const double d = g.d;
    const double as_d = std::pow(a, s) * d;
    const double a2s = std::pow(a2, s);
    const double W = sig_box_width(a, g);
    const double sv2 = std::sqrt(p.sigmav2_sq);
    const double half_d = 0.5 * d;

    const double drift = 1.0 / (1.0 - 1.0 / a);
    const double line1 = 2.0 * a2s *
                         (2.0 * half_d * half_d * drift * drift + 2.0 / (1.0 - 1.0 / a2) +
                          2.0 * a2 * p.sigmav1_sq);

    const double line2 = sum_series(
        [&](long i) {
            const double m = static_cast<double>(i) * as_d + 0.5 * W;
            const double arg = (static_cast<double>(2 * i - 1) * as_d - W) / (2.0 * sv2);
            return 4.0 * a2 * m * m * q_tail(arg);
        },
        1, opt);

    const double spread = std::sqrt(std::pow(a2, s - 1) * a2 / (a2 - 1.0) + a2s * p.sigmav1_sq);
    const double lead = 8.0 * a2 * q_tail(g.w1 / (2.0 * spread));
    double line3 = 0.0;
    if (lead > 0) {
        line3 = lead * sum_series(
                           [&](long i) {
                               const double m = (static_cast<double>(i) + 0.5) * as_d;
                               const double arg = i == 1 ? 0.0 : static_cast<double>(i - 1) * as_d / sv2;
                               return m * m * q_tail(arg);
                           },
                           1, opt);
    }
    const double line4 = 2.0 * a2 * half_d * half_d + 1.0;

    const double D = line1 + line2 + line3 + line4;
    const double P1 = a2 * d * d / 4.0;
    const double P2 = 8.0 * a2 * D + 3.5 * a2s * a2 * d * d + 4.0 * a2 * p.sigmav2_sq;
    return TradeoffPoint{D, P1, P2};
}

TradeoffPoint linbb_bound(const ProblemParams& p, int controller) {
    if (controller != 1 && controller != 2) throw InvalidArgument("controller must be 1 or 2");
    const double a2 = p.a * p.a;
    const double sv = controller == 1 ? p.sigmav1_sq : p.sigmav2_sq;
    const double D = a2 * sv + 1.0;
    const double P = a2 * a2 * sv + a2 * sv + a2;
    return controller == 1 ? TradeoffPoint{D, P, 0.0} : TradeoffPoint{D, 0.0, P};
}

PowerBracket simplified_bracket(const ProblemParams& p, int s) {
    const double a2 = p.a * p.a;
    return PowerBracket{p.sigmav2_sq / (70.0 * std::pow(a2, s - 1)),
                        std::max(a2, a2 * a2 * p.sigmav1_sq) / 20000.0};
}

TradeoffPoint simplified_upper(const ProblemParams& p, int s, double P) {
    if (!(std::fabs(p.a) >= 2.5)) throw InvalidArgument("simplified_upper needs |a| >= 2.5");
    const PowerBracket br = simplified_bracket(p, s);
    if (!(P >= br.lo && P <= br.hi))
        throw InvalidArgument("P outside [" + std::to_string(br.lo) + ", " + std::to_string(br.hi) + "]");
    const double a2 = p.a * p.a;
    const double a2s = std::pow(a2, s);
    const double m = first_noise_scale(p);
    const double e = std::exp(-50.0 * std::pow(a2, s - 1) * P / p.sigmav2_sq);
    return TradeoffPoint{832.0 * a2s * P * e + 63.0 * a2s * m, 80000.0 * P,
                         6656.0 * a2s * a2 * P * e + 564.0 * a2s * a2 * m};
}

SigDesign simplified_design(const ProblemParams& p, int s, double P) {
    const double a = std::fabs(p.a);
    const double d = std::sqrt(320000.0 * P / (a * a));
    return SigDesign{s, d, std::pow(a, s) * d / 6.0};
}

std::vector<UpperCandidate> upper_candidates(const ProblemParams& p) {
    std::vector<UpperCandidate> out;
    out.push_back({LinBB{1}, linbb_bound(p, 1), std::nullopt});
    out.push_back({LinBB{2}, linbb_bound(p, 2), std::nullopt});
    const double a = std::fabs(p.a);
    if (!(a > 1)) return out;
    const Regime reg = classify(p);
    if (!reg.strong()) return out;
    const int s = reg.s;
    const double as = std::pow(a, s);
    const double base = std::sqrt(p.sigmav2_sq) / as;
    const double room = 1.0 - 1.0 / (a - 1.0);
    constexpr int kGrid = 200;
    for (int j = 0; j < kGrid; ++j) {
        const double d = base * std::pow(10.0, -4.0 + 8.0 * j / (kGrid - 1));
        std::vector<double> widths{as * d / 6.0};
        if (room > 0)
            for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) widths.push_back(as * d * room * f);
        for (double w1 : widths) {
            const SigDesign g{s, d, w1};
            try {
                check_feasible(p.a, g);
                out.push_back({Sig{s, d}, du1(p, g), g});
            } catch (const InvalidArgument&) {
            } catch (const SeriesNonConvergence&) {
            }
        }
    }
    return out;
}

UpperResult best_upper(const ProblemParams& p, const std::vector<UpperCandidate>& cands) {
    UpperResult best;
    best.spec = ZeroInput{};
    for (const auto& c : cands) {
        const double v = weighted(p, c.point);
        if (v < best.cost) {
            best.cost = v;
            best.spec = c.spec;
            best.point = c.point;
            best.design = c.design;
        }
    }
    return best;
}

UpperResult optimize_upper(const ProblemParams& p) {
    return best_upper(p, upper_candidates(p));
}

}  // namespace lqgduet
