#include "lqgduet/certifier.hpp"

#include <algorithm>
#include <cmath>

namespace lqgduet {

namespace {

constexpr double kTol = 1e-12;

double regime_thresholds_strong_t1(const ProblemParams& p, int s) {
    return p.sigmav2_sq / (70.0 * std::pow(p.a * p.a, s - 1));
}

double regime_thresholds_strong_t3(const ProblemParams& p) {
    const double a2 = p.a * p.a;
    return std::max(a2, a2 * a2 * p.sigmav1_sq) / 20000.0;
}

double strong_exp_term(const ProblemParams& p, int s, double P1) {
    return P1 * std::exp(-50.0 * std::pow(p.a * p.a, s - 1) * P1 / p.sigmav2_sq);
}

double strong_p2_threshold(const ProblemParams& p, int s, double P1) {
    const double a2 = p.a * p.a;
    const double k = std::pow(a2, s + 1);
    return 0.0457 * k * strong_exp_term(p, s, P1) + 0.0113 * k * first_noise_scale(p);
}

}  // namespace

bool ratio_transfer_check(const TradeoffFn& DU, const TradeoffFn& DL, double c, const std::vector<PowerPair>& grid) {
    if (!(c >= 1)) throw InvalidArgument("ratio_transfer_check needs c >= 1");
    for (const auto& [x1, x2] : grid) {
        const double dl = DL(x1, x2);
        if (!std::isfinite(dl)) continue;
        const double du = DU(c * x1, c * x2);
        if (!(du <= c * dl * (1.0 + kTol))) return false;
    }
    return true;
}

double default_cap(const Regime& r) { return r.strong() ? kStrongCap : kWeakCap; }

std::string region_label(const ProblemParams& p, double P1, double P2) {
    const Regime reg = classify(p);
    const double a2 = p.a * p.a;
    if (!reg.strong()) {
        const double t1 = a2 * first_noise_scale(p) / 400.0;
        const double t2 = a2 * std::max(1.0, a2 * p.sigmav2_sq) / 400.0;
        if (P1 <= t1) return P2 <= t2 ? "weak(i)" : "weak(ii)";
        return "weak(iii)";
    }
    const int s = reg.s;
    if (P1 <= regime_thresholds_strong_t1(p, s)) return P2 <= a2 * a2 * p.sigmav2_sq / 28000.0 ? "strong(i)" : "strong(ii)";
    if (P1 <= regime_thresholds_strong_t3(p)) return P2 <= strong_p2_threshold(p, s, P1) ? "strong(iii)" : "strong(iv)";
    return "strong(v)";
}

double region_constant(const std::string& label) {
    if (label.starts_with("weak")) return kWeakCap;
    if (label == "strong(ii)") return std::max(1.0 / 0.008, 1.32 * 28000.0);
    if (label == "strong(iv)")
        return std::max({832.0 / 0.2541, 63.0 / 0.066, 80000.0, 6656.0 / 0.0457, 564.0 / 0.0113});
    if (label == "strong(v)") return std::max(2.0 / 0.295, 3.0 * 20000.0);
    return 1.0;
}

double closed_form_lower_tradeoff(const ProblemParams& p, double P1, double P2) {
    const Regime reg = classify(p);
    const double a2 = p.a * p.a;
    const double m = first_noise_scale(p);
    double out = 0.295 * m;
    if (!reg.strong()) {
        const double t1 = a2 * m / 400.0;
        const double t2 = a2 * std::max(1.0, a2 * p.sigmav2_sq) / 400.0;
        if (P1 <= t1 && P2 <= t2) return kInf;
        if (P1 <= t1) out = std::max(out, 0.176 * a2 * p.sigmav2_sq + 1.0);
        return out;
    }
    const int s = reg.s;
    const double t1 = regime_thresholds_strong_t1(p, s);
    const double t3 = regime_thresholds_strong_t3(p);
    if (P1 <= t1) {
        if (P2 <= a2 * a2 * p.sigmav2_sq / 28000.0) return kInf;
        out = std::max(out, 0.008 * a2 * p.sigmav2_sq + 1.0);
    }
    if (P1 >= t1 && P1 <= t3) {
        if (P2 <= strong_p2_threshold(p, s, P1)) return kInf;
        const double a2s = std::pow(a2, s);
        out = std::max(out, 0.2541 * a2s * strong_exp_term(p, s, P1) + 0.066 * a2s * m + 1.0);
    }
    return out;
}

double closed_form_upper_tradeoff(const ProblemParams& p, double X1, double X2) {
    auto fits = [&](double need, double have) { return need <= have * (1.0 + kTol); };
    double best = kInf;
    for (int c = 1; c <= 2; ++c) {
        const TradeoffPoint t = linbb_bound(p, c);
        if (fits(t.P1, X1) && fits(t.P2, X2)) best = std::min(best, t.D);
    }
    const Regime reg = classify(p);
    if (!reg.strong()) return best;
    const PowerBracket br = simplified_bracket(p, reg.s);
    if (!(br.lo <= br.hi)) return best;
    std::vector<double> grid;
    for (int i = 0; i <= 64; ++i) grid.push_back(br.lo * std::pow(br.hi / br.lo, i / 64.0));
    const double top = std::min(br.hi, X1 / 80000.0);
    if (top >= br.lo) grid.push_back(top);
    for (double P : grid) {
        if (P < br.lo || P > br.hi) continue;
        const TradeoffPoint t = simplified_upper(p, reg.s, P);
        if (fits(t.P1, X1) && fits(t.P2, X2)) best = std::min(best, t.D);
    }
    return best;
}

std::vector<RegionCheck> region_transfer_checks(const ProblemParams& p, int per_decade) {
    const double a2 = p.a * p.a;
    const double hi = 1e6 * a2 * a2 * std::max({1.0, p.sigmav2_sq, a2 * p.sigmav1_sq});
    std::vector<double> axis;
    for (double e = -4.0; std::pow(10.0, e) <= hi; e += 1.0 / per_decade) axis.push_back(std::pow(10.0, e));
    const Regime reg = classify(p);
    if (reg.strong()) {
        const int s = reg.s;
        const double t1 = regime_thresholds_strong_t1(p, s);
        const double t3 = regime_thresholds_strong_t3(p);
        for (double v : {t1, t3, a2 * a2 * p.sigmav2_sq / 28000.0}) {
            axis.push_back(v);
            axis.push_back(v * (1 + 1e-9));
        }
    } else {
        for (double v : {a2 * first_noise_scale(p) / 400.0, a2 * std::max(1.0, a2 * p.sigmav2_sq) / 400.0}) {
            axis.push_back(v);
            axis.push_back(v * (1 + 1e-9));
        }
    }
    std::sort(axis.begin(), axis.end());

    std::vector<std::string> labels = reg.strong()
        ? std::vector<std::string>{"strong(i)", "strong(ii)", "strong(iii)", "strong(iv)", "strong(v)"}
        : std::vector<std::string>{"weak(i)", "weak(ii)", "weak(iii)"};
    std::vector<RegionCheck> out;
    for (const auto& l : labels) out.push_back(RegionCheck{l, region_constant(l), 0, true});

    const TradeoffFn DU = [&](double x, double y) { return closed_form_upper_tradeoff(p, x, y); };
    const TradeoffFn DL = [&](double x, double y) { return closed_form_lower_tradeoff(p, x, y); };
    for (double x : axis) {
        for (double y : axis) {
            const std::string l = region_label(p, x, y);
            auto it = std::find_if(out.begin(), out.end(), [&](const RegionCheck& r) { return r.label == l; });
            ++it->points;
            if (!ratio_transfer_check(DU, DL, it->c, {{x, y}})) it->pass = false;
        }
    }
    return out;
}

CertReport certify_with(const ProblemParams& p, LowerBound& lower, const std::vector<UpperCandidate>& cands,
                        double cap) {
    CertReport rep;
    rep.params = p;
    rep.regime = classify(p);
    rep.cap = cap > 0 ? cap : default_cap(rep.regime);
    const UpperResult up = best_upper(p, cands);
    rep.upper = up.cost;
    rep.upper_strategy = strategy_label(up.spec);
    const LowerResult lo = lower.minimize(p.q, p.r1, p.r2);
    rep.lower = lo.cost;
    rep.P1t = lo.P1;
    rep.P2t = lo.P2;
    rep.case_label = region_label(p, lo.P1, lo.P2);
    if (rep.lower <= 0) {
        rep.degenerate = true;
        rep.ratio = rep.upper == 0 ? 1.0 : kInf;
        rep.pass = false;
        return rep;
    }
    rep.ratio = std::isfinite(rep.upper) ? std::exp(std::log(rep.upper) - std::log(rep.lower)) : kInf;
    rep.pass = rep.ratio <= rep.cap;
    return rep;
}

CertReport certify_point(const ProblemParams& p, double cap) {
    if (!(std::fabs(p.a) >= 2.5)) throw InvalidArgument("certify_point needs |a| >= 2.5");
    LowerBound lower(p);
    return certify_with(p, lower, upper_candidates(p), cap);
}

GridScope parse_grid_scope(const std::string& text) {
    if (text == "strong") return GridScope::Strong;
    if (text == "weak") return GridScope::Weak;
    if (text == "all") return GridScope::All;
    throw InvalidArgument("grid scope must be strong, weak or all");
}

std::vector<ProblemParams> desk_grid(GridScope scope) {
    std::vector<ProblemParams> out;
    const double sv1_values[] = {0.0, 1.0, 10.0};
    auto base = [](double a, double sv1, double sv2) {
        ProblemParams p;
        p.a = a;
        p.sigmav1_sq = sv1;
        p.sigmav2_sq = sv2;
        return p;
    };
    if (scope != GridScope::Weak)
        for (double a : {2.5, 5.0, 25.0, 100.0})
            for (int s : {1, 2, 3})
                for (double sv1 : sv1_values) {
                    const double m = std::max(1.0, a * a * sv1);
                    out.push_back(base(a, sv1, std::pow(a, 2 * s - 1) * m));
                }
    if (scope != GridScope::Strong)
        for (double a : {2.5, 5.0, 25.0})
            for (double sv1 : sv1_values)
                for (double f : {0.1, 1.0}) {
                    const double m = std::max(1.0, a * a * sv1);
                    out.push_back(base(a, sv1, std::max(sv1, f * m)));
                }
    return out;
}

std::vector<std::array<double, 3>> weight_grid() {
    std::vector<std::array<double, 3>> out;
    const double w[] = {1e-3, 1.0, 1e3};
    for (double q : w)
        for (double r1 : w)
            for (double r2 : w) out.push_back({q, r1, r2});
    return out;
}

GridSummary certify_grid(const std::vector<ProblemParams>& bases, double strong_cap, double weak_cap,
                         const GridProgress& progress) {
    GridSummary sum;
    for (const ProblemParams& base : bases) {
        LowerBound lower(base);
        const auto cands = upper_candidates(base);
        const Regime regime = classify(base);
        const double cap = regime.strong() ? strong_cap : weak_cap;
        for (const auto& [q, r1, r2] : weight_grid()) {
            ProblemParams p = base;
            p.q = q;
            p.r1 = r1;
            p.r2 = r2;
            CertReport rep = certify_with(p, lower, cands, cap);
            if (!rep.pass) ++sum.failures;
            double& worst = regime.strong() ? sum.worst_strong : sum.worst_weak;
            worst = std::max(worst, rep.ratio);
            if (progress) progress(rep);
            sum.reports.push_back(std::move(rep));
        }
        for (auto& rc : region_transfer_checks(base)) {
            if (!rc.pass) ++sum.region_failures;
            sum.regions.push_back(std::move(rc));
        }
    }
    return sum;
}

std::vector<Prop1Row> prop1_divergence(const std::vector<double>& a_values, bool natural_log) {
    std::vector<Prop1Row> rows;
    for (double a : a_values) {
        if (!(a >= kProp1MinA)) throw InvalidArgument("prop1 table needs a >= 1e4");
        const double la = std::log(a);
        const double lg = natural_log ? la : std::log2(a);
        Prop1Row r;
        r.a = a;
        r.linear_lb = a * a * a / 66.0;
        r.nonlinear_ub = 3297.0 * a * a * lg;
        r.log_ratio = la - std::log(66.0) - std::log(3297.0) - std::log(lg);
        r.ratio = std::exp(r.log_ratio);
        rows.push_back(r);
    }
    return rows;
}

ProblemParams prop1_params(double a) {
    ProblemParams p;
    p.a = a;
    p.q = 1.0;
    p.r1 = a;
    p.r2 = 0.0;
    p.sigmav1_sq = 0.0;
    p.sigmav2_sq = a;
    return p;
}

}  // namespace lqgduet
