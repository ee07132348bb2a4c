#include "lqgduet/bounds_lower.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <queue>

namespace lqgduet {

namespace {

struct Slicing {
    double a, a2, theta, rho, beta, h_inf;
};

Slicing slicing(double a_signed, double theta) {
    const double a = std::fabs(a_signed);
    if (!(theta > 1)) throw InvalidArgument("slicing ratio theta must exceed 1");
    if (!(a * a > theta)) throw InvalidArgument("lower bounds need a^2 > theta");
    Slicing s{a, a * a, theta, theta / (a * a), 1.0 - 1.0 / theta, 0.0};
    s.h_inf = 1.0 / (1.0 - s.rho);
    return s;
}

double geo(double rho, long m) {
    if (m <= 0) return 0.0;
    return (1.0 - std::pow(rho, static_cast<double>(m))) / (1.0 - rho);
}

double rad(double coef, double P) {
    if (coef == 0 || P == 0) return 0.0;
    return std::sqrt(coef * P);
}

double pos_sq(double x) { return x > 0 ? x * x : 0.0; }

double log_of(double x, bool base2) { return base2 ? std::log2(x) : std::log(x); }

// 2^(-I) in the configured base
double attenuation(double info, bool base2) { return base2 ? std::exp2(-info) : std::exp(-info); }

double ratio_term(double num, double den) {
    if (num == 0) return 0.0;
    return num / den;
}

bool unbounded(double bracket, double scale, double margin) {
    return bracket > 0 && bracket > margin * scale;
}

double half_log_pie2(bool base2) { return 0.5 * log_of(std::numbers::pi * std::numbers::e / 2.0, base2); }

void check_geometric(double a, double w) {
    if (!(w > 0 && w < 1)) throw InvalidArgument("slicing weight w must lie in (0, 1)");
    if (!(std::fabs(1.0 / (a * a * w)) < 1)) throw InvalidArgument("geometric condition |1/(a^2 w)| < 1 violated");
}

// Observation-energy numerator shared by the state-amplification bounds.
double amp_numerator_first(double a2, double sigma0_sq, int k, double w, double P) {
    const double g = 1.0 - 1.0 / a2;
    const double x0 = sigma0_sq == 0 ? 0.0 : 2.0 * std::pow(a2, k - 1) * sigma0_sq / g;
    const double xp = P == 0 ? 0.0 : 2.0 * std::pow(a2, k - 2) / g * P / ((1.0 - 1.0 / (a2 * w)) * (1.0 - w));
    return x0 + xp;
}

double amp_numerator_last(double a2, double sigma0_sq, int k, double w, double P) {
    const double x0 = sigma0_sq == 0 ? 0.0 : 2.0 * std::pow(a2, k - 1) * sigma0_sq;
    const double xp = P == 0 ? 0.0 : 2.0 * std::pow(a2, k - 2) / (1.0 - 1.0 / (a2 * w)) * P / (1.0 - w);
    return x0 + xp;
}

}  // namespace

double info_mmse(double a, double s1, double s2, int k1, int k) {
    if (k1 < 1 || k < 1) throw InvalidArgument("info_mmse needs k1, k >= 1");
    if (s1 == 0) return 0.0;
    if (s2 == 0) return 0.0;
    const double a2 = a * a;
    const double ratio = s1 / s2;
    const double geom = (1.0 - std::pow(a2, -k1)) / (1.0 - 1.0 / a2);
    return std::pow(a2, k - k1) * s1 / ((1.0 + ratio) * geom + s1 * std::pow(a2, -(k1 - 1)));
}

double sigma_cap(const ProblemParams& p, int k1) {
    if (k1 < 1) throw InvalidArgument("k1 must be at least 1");
    if (k1 == 1) return 1.0;
    return info_mmse(p.a, p.sigmav1_sq, p.sigmav2_sq, k1 - 1, k1);
}

double sigma_cap_limit(const ProblemParams& p) {
    if (p.sigmav1_sq == 0 || p.sigmav2_sq == 0) return 0.0;
    return (p.a * p.a - 1.0) * p.sigmav1_sq / (1.0 + p.sigmav1_sq / p.sigmav2_sq);
}

bool in_slice_set(const ProblemParams& p, const SliceParams& sp) {
    if (sp.k1 < 1 || sp.k2 - sp.k1 - 1 < 0 || sp.k < sp.k2) return false;
    if (!(sp.sigma_v2_prime_sq >= 0) || !(sp.alpha >= 0 && sp.alpha <= 1)) return false;
    return sp.Sigma >= 0 && sp.Sigma <= sigma_cap(p, sp.k1);
}

double power_expand(double a, double b, const std::vector<double>& e) {
    const double z = 1.0 / (a * a * b);
    if (!(std::fabs(z) < 1)) throw InvalidArgument("geometric condition |1/(a^2 b)| < 1 violated");
    const int n = static_cast<int>(e.size());
    if (n == 0) return 0.0;
    const double pre = std::pow(a * a, n - 1) * (1.0 - std::pow(z, n)) / (1.0 - z);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(e[static_cast<std::size_t>(i)] >= 0)) throw InvalidArgument("weighted powers must be nonnegative");
        sum += std::pow(b, i) * e[static_cast<std::size_t>(i)];
    }
    return pre * sum;
}

double mutual_info_Ik(double a, double sigma0_sq, double sigmav_sq, int k, double w, double P, bool base2) {
    check_geometric(a, w);
    if (k < 0) throw InvalidArgument("k must be nonnegative");
    if (k == 0) return 0.0;
    const double x = amp_numerator_first(a * a, sigma0_sq, k, w, P);
    if (x == 0) return 0.0;
    return 0.5 * k * log_of(1.0 + x / (k * sigmav_sq), base2);
}

double mutual_info_Ik_prime(double a, double sigma0_sq, double sigmav_sq, int k, double w, double P,
                            double sigmav_last_sq, bool base2) {
    if (k < 1) throw InvalidArgument("k must be at least 1");
    const double prev = mutual_info_Ik(a, sigma0_sq, sigmav_sq, k - 1, w, P, base2);
    const double x = amp_numerator_last(a * a, sigma0_sq, k, w, P);
    return prev + 0.5 * log_of(1.0 + ratio_term(x, sigmav_last_sq), base2);
}

double mutual_info_Ik_doubleprime(double a, double sigma0_sq, double sigmav_sq, int k, double w, double P,
                                  double sigmav_last_sq, bool base2) {
    return mutual_info_Ik_prime(a, sigma0_sq, sigmav_sq, k, w, P, sigmav_last_sq, base2) +
           half_log_pie2(base2);
}

double large_deviation_c(double sv2, double svp) {
    if (svp == sv2) return 1.0;
    if (sv2 == 0 || !std::isfinite(svp)) return 0.0;
    const double t2 = svp / sv2;
    return 2.0 * std::sqrt(t2) / std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * t2);
}

double dl1(const ProblemParams& p, const SliceParams& sp, double P1, double P2, const LowerConfig& cfg) {
    if (!in_slice_set(p, sp)) throw InvalidArgument("slice parameters outside the admissible set");
    const Slicing g = slicing(p.a, cfg.theta);
    const int n = sp.k2 - sp.k1 - 1;
    const double w = 1.0 / g.theta;
    const double tp = g.theta * P1;
    const double i2 = mutual_info_Ik(g.a, sp.Sigma, p.sigmav2_sq, n, w, tp, cfg.log_base2);
    const bool same = sp.sigma_v2_prime_sq == p.sigmav2_sq;
    const double i1 = mutual_info_Ik_prime(g.a, sp.Sigma, p.sigmav2_sq, n + 1, w, tp, sp.sigma_v2_prime_sq,
                                           cfg.log_base2) +
                      (same ? 0.0 : half_log_pie2(cfg.log_base2));
    const double c = large_deviation_c(p.sigmav2_sq, sp.sigma_v2_prime_sq);
    const int kk1 = sp.k - sp.k1;
    const int kk2 = sp.k - sp.k2;

    double out = 1.0;
    if (sp.alpha > 0) {
        const double r1 = std::sqrt(c * sp.Sigma) * std::pow(g.a, kk1) * attenuation(i1, cfg.log_base2);
        const double r2 = rad(c * std::pow(g.a2, kk1 - 1) * geo(g.rho, sp.k2 - sp.k1) / g.beta, P1);
        const double tail = std::pow(g.a2, kk2 - 1) * geo(g.rho, kk2) / g.beta;
        const double r3 = rad(tail * std::pow(g.theta, sp.k2 - sp.k1), P1);
        const double r4 = rad(tail, P2);
        out += sp.alpha * pos_sq(r1 - r2 - r3 - r4);
    }
    if (sp.alpha < 1 && sp.k > sp.k1 + 1) {
        const double s1 = std::sqrt(sp.Sigma) * std::pow(g.a, kk1 - 1) * attenuation(i2, cfg.log_base2);
        const double s2 = rad(std::pow(g.a2, kk1 - 2) * geo(g.rho, kk1 - 1) * g.theta / g.beta, P1);
        const double s3 = rad(std::pow(g.a2, kk2 - 1) * geo(g.rho, kk2) / g.beta, P2);
        out += (1.0 - sp.alpha) * pos_sq(s1 - s2 - s3);
    }
    return out;
}

RadnerMin radner_quadratic_min(double a, double S, double v1, double v2, double b1, double b2) {
    auto f = [&](double c1, double c2) {
        const double e = a - c1 - c2;
        double out = 0.0;
        if (S != 0) out += e * e * S;
        if (v1 != 0) out += c1 * c1 * v1;
        if (v2 != 0) out += c2 * c2 * v2;
        return out;
    };
    if (S == 0) return RadnerMin{0.0, 0.0, 0.0};
    const double det = S * (v1 + v2) + v1 * v2;
    if (det == 0) {
        const double c1 = std::min(a, b1);
        const double c2 = std::min(a - c1, b2);
        return RadnerMin{f(c1, c2), c1, c2};
    }
    const double c1s = S * a * v2 / det;
    const double c2s = S * a * v1 / det;
    if (std::fabs(c1s) <= b1 && std::fabs(c2s) <= b2) return RadnerMin{f(c1s, c2s), c1s, c2s};
    RadnerMin best{kInf, 0.0, 0.0};
    auto edge = [&](double fixed, bool first) {
        const double vo = first ? v2 : v1;
        const double bo = first ? b2 : b1;
        const double opt = S * (a - fixed) / (S + vo);
        const double other = std::clamp(opt, -bo, bo);
        const double c1 = first ? fixed : other;
        const double c2 = first ? other : fixed;
        const double v = f(c1, c2);
        if (v < best.value) best = RadnerMin{v, c1, c2};
    };
    if (std::isfinite(b1)) {
        edge(b1, true);
        edge(-b1, true);
    }
    if (std::isfinite(b2)) {
        edge(b2, false);
        edge(-b2, false);
    }
    return best;
}

namespace {

double radner_bound(double P, double beta, double S, double v) {
    if (!std::isfinite(P)) return kInf;
    const double den = beta * (S + v);
    if (den == 0) return kInf;
    return std::sqrt(P / den);
}

double radner_value(const Slicing& g, const ProblemParams& p, double S, double P1, double P2) {
    return radner_quadratic_min(g.a, S, p.sigmav1_sq, p.sigmav2_sq, radner_bound(P1, g.beta, S, p.sigmav1_sq),
                                radner_bound(P2, g.beta, S, p.sigmav2_sq))
        .value;
}

}  // namespace

double dl2(const ProblemParams& p, int k1, int k, double S, double P1, double P2, const LowerConfig& cfg) {
    if (k1 < 1 || k < k1 + 1) throw InvalidArgument("dl2 needs k1 >= 1 and k >= k1 + 1");
    if (!(S >= 0 && S <= sigma_cap(p, k1))) throw InvalidArgument("dl2 Sigma outside its cap");
    const Slicing g = slicing(p.a, cfg.theta);
    const double F = radner_value(g, p, S, P1, P2);
    const int j = k - k1;
    const double coef = std::pow(g.a2, j - 2) * geo(g.rho, j - 1) * g.theta / g.beta;
    return pos_sq(std::sqrt(std::pow(g.a2, j - 1) * F) - rad(coef, P1) - rad(coef, P2)) + 1.0;
}

double dl3(const ProblemParams& p, int k1) {
    if (k1 < 1) throw InvalidArgument("k1 must be at least 1");
    if (p.sigmav1_sq == 0) return 1.0;
    if (k1 == 1) return 1.0;
    return std::max(info_mmse(p.a, p.sigmav1_sq, p.sigmav2_sq, k1 - 1, k1), 1.0);
}

double dl3_sup(const ProblemParams& p) { return std::max(1.0, sigma_cap_limit(p)); }

double dl4(const ProblemParams& p, int k, double P1, double P2, const LowerConfig& cfg) {
    if (k < 2) throw InvalidArgument("dl4 needs k >= 2");
    const Slicing g = slicing(p.a, cfg.theta);
    const double coef = std::pow(g.a2, k - 2) / ((1.0 - g.rho) * g.beta);
    return pos_sq(std::sqrt(std::pow(g.a2, k - 1)) - rad(coef, P1) - rad(coef, P2));
}

std::string envelope_name(Envelope e) {
    switch (e) {
        case Envelope::L1: return "L1";
        case Envelope::L2: return "L2";
        case Envelope::L3: return "L3";
        default: return "L4";
    }
}

std::size_t LowerBound::KeyHash::operator()(const Key& k) const {
    const auto x = std::bit_cast<std::uint64_t>(k.x);
    const auto y = std::bit_cast<std::uint64_t>(k.y);
    return std::hash<std::uint64_t>{}(x * 0x9E3779B97F4A7C15ull ^ (y + 0x632BE59BD9B4E019ull));
}

LowerBound::LowerBound(const ProblemParams& p, const LowerConfig& cfg) : p_(p), cfg_(cfg) {
    validate(p_);
    if (!(std::fabs(p_.a) >= 2.5)) throw InvalidArgument("lower bounds need |a| >= 2.5");
    slicing(p_.a, cfg_.theta);
    const Regime reg = classify(p_);
    s_ = reg.strong() ? reg.s : 0;
    l3_ = dl3_sup(p_);
    const double smax = std::max(1.0, sigma_cap_limit(p_));
    for (double f : {1.0, 0.5, 0.25, 0.1, 0.03, 0.01}) sigmas_.push_back(smax * f);
    const double recipe = 0.295 * first_noise_scale(p_);
    if (recipe <= smax) sigmas_.push_back(recipe);
    std::sort(sigmas_.begin(), sigmas_.end());
    sigmas_.erase(std::unique(sigmas_.begin(), sigmas_.end()), sigmas_.end());
}

EnvelopeValue LowerBound::envelope(double P1, double P2) {
    const Key key{P1, P2};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const EnvelopeValue v = compute(P1, P2);
    cache_.emplace(key, v);
    return v;
}

EnvelopeValue LowerBound::compute(double P1, double P2) const {
    const Slicing g = slicing(p_.a, cfg_.theta);
    const bool b2 = cfg_.log_base2;
    const double margin = cfg_.inf_margin;
    EnvelopeValue best{l3_, Envelope::L3};
    auto offer = [&](double v, Envelope e) {
        if (v > best.value) best = EnvelopeValue{v, e};
    };

    {
        const double c = std::sqrt(1.0 / ((1.0 - g.rho) * g.beta));
        const double r1 = rad(c * c, P1), r2 = rad(c * c, P2);
        if (unbounded(g.a - r1 - r2, g.a + r1 + r2, margin)) return EnvelopeValue{kInf, Envelope::L4};
    }

    for (double S : {1.0, sigma_cap_limit(p_)}) {
        const double F = radner_value(g, p_, S, P1, P2);
        const double lead_inf = std::sqrt(g.a2 * F);
        const double t_inf = rad(g.h_inf * g.theta / g.beta, P1) + rad(g.h_inf * g.theta / g.beta, P2);
        if (unbounded(lead_inf - t_inf, lead_inf + t_inf, margin)) return EnvelopeValue{kInf, Envelope::L2};
        for (int j = 1; j <= 4; ++j) {
            const double coef = std::pow(g.a2, j - 2) * geo(g.rho, j - 1) * g.theta / g.beta;
            offer(pos_sq(std::sqrt(std::pow(g.a2, j - 1) * F) - rad(coef, P1) - rad(coef, P2)) + 1.0,
                  Envelope::L2);
        }
    }

    const double w = 1.0 / g.theta;
    const double tp = g.theta * P1;
    const double sv2 = p_.sigmav2_sq;
    std::vector<double> primes{sv2, 0.25 * sv2, 0.0625 * sv2, 0.01 * sv2};
    if (P1 > 0 && std::isfinite(P1)) {
        const double base = std::pow(g.a2, std::max(s_, 1) - 1) * P1;
        for (double m : {25.0, 100.0, 400.0}) primes.push_back(m * base);
    }
    const int nmax = s_ + cfg_.extra_stages;
    const double tail_inf2 = rad(g.h_inf / g.beta, P2);
    for (int n = 0; n <= nmax; ++n) {
        const double last = amp_numerator_last(g.a2, 0.0, n + 1, w, tp);
        for (double S : sigmas_) {
            const double i2 = mutual_info_Ik(g.a, S, sv2, n, w, tp, b2);
            const double sqS = std::sqrt(S);
            const double att2 = attenuation(i2, b2);
            {
                const double s1 = sqS * std::pow(g.a, n + 1) * att2;
                const double s2 = rad(std::pow(g.a2, n) * g.h_inf * g.theta / g.beta, P1);
                if (unbounded(s1 - s2 - tail_inf2, s1 + s2 + tail_inf2, margin))
                    return EnvelopeValue{kInf, Envelope::L1};
            }
            for (int j = n == 0 ? 1 : 0; j <= 2; ++j) {
                const double s1 = sqS * std::pow(g.a, n + j) * att2;
                const double s2 = rad(std::pow(g.a2, n + j - 1) * geo(g.rho, n + j) * g.theta / g.beta, P1);
                const double s3 = rad(std::pow(g.a2, j - 1) * geo(g.rho, j) / g.beta, P2);
                offer(pos_sq(s1 - s2 - s3) + 1.0, Envelope::L1);
            }
            const double x_last = 2.0 * std::pow(g.a2, n) * S + last;
            for (double sp : primes) {
                const bool same = sp == sv2;
                const double c = large_deviation_c(sv2, sp);
                if (c == 0) continue;
                const double i1 = i2 + 0.5 * log_of(1.0 + ratio_term(x_last, sp), b2) + (same ? 0.0 : half_log_pie2(b2));
                const double att1 = attenuation(i1, b2);
                const double sqcS = std::sqrt(c * S);
                {
                    const double r1 = sqcS * std::pow(g.a, n + 2) * att1;
                    const double r2 = rad(c * std::pow(g.a2, n + 1) * geo(g.rho, n + 1) / g.beta, P1);
                    const double r3 = rad(g.h_inf * std::pow(g.theta, n + 1) / g.beta, P1);
                    const double sub = r2 + r3 + tail_inf2;
                    if (unbounded(r1 - sub, r1 + sub, margin)) return EnvelopeValue{kInf, Envelope::L1};
                }
                for (int j = 0; j <= 2; ++j) {
                    const double r1 = sqcS * std::pow(g.a, n + 1 + j) * att1;
                    const double r2 = rad(c * std::pow(g.a2, n + j) * geo(g.rho, n + 1) / g.beta, P1);
                    const double tail = std::pow(g.a2, j - 1) * geo(g.rho, j) / g.beta;
                    const double r3 = rad(tail * std::pow(g.theta, n + 1), P1);
                    const double r4 = rad(tail, P2);
                    offer(pos_sq(r1 - r2 - r3 - r4) + 1.0, Envelope::L1);
                }
            }
        }
    }
    return best;
}

namespace {

double weigh(double w, double v) { return w == 0 ? 0.0 : w * v; }

struct Cell {
    double lo1, hi1, lo2, hi2, lb;
    bool operator>(const Cell& o) const { return lb > o.lb; }
};

std::vector<double> split_axis(double lo, double hi) {
    if (!std::isfinite(hi)) return {lo, hi};
    if (lo == 0) return {lo, hi / 10.0, hi};
    if (hi / lo > 1.0 + 1e-9) return {lo, std::sqrt(lo * hi), hi};
    return {lo, hi};
}

}  // namespace

LowerResult LowerBound::minimize(double q, double r1, double r2) {
    if (!(q >= 0 && r1 >= 0 && r2 >= 0)) throw InvalidArgument("weights must be nonnegative");
    LowerResult res;
    if (q == 0) {
        res.cost = 0.0;
        res.estimate = 0.0;
        return res;
    }
    const double a2 = p_.a * p_.a;
    const double scale = std::max({1.0, p_.sigmav2_sq, a2 * p_.sigmav1_sq});
    const double pmax = 1e4 * a2 * a2 * scale;
    std::vector<double> axis{0.0};
    for (int e = -3; e <= static_cast<int>(std::ceil(std::log10(pmax))); ++e) axis.push_back(std::pow(10.0, e));
    axis.push_back(kInf);

    const std::size_t cache_before = cache_.size();
    auto corner = [&](double x, double y) {
        const EnvelopeValue v = envelope(x, y);
        const double f = weigh(q, v.value) + weigh(r1, x) + weigh(r2, y);
        if (f < res.estimate) {
            res.estimate = f;
            res.P1 = x;
            res.P2 = y;
            res.which = v.which;
        }
        return v.value;
    };
    auto make = [&](double lo1, double hi1, double lo2, double hi2) {
        const double d = corner(hi1, hi2);
        return Cell{lo1, hi1, lo2, hi2, weigh(q, d) + weigh(r1, lo1) + weigh(r2, lo2)};
    };

    std::priority_queue<Cell, std::vector<Cell>, std::greater<>> heap;
    for (std::size_t i = 0; i + 1 < axis.size(); ++i)
        for (std::size_t j = 0; j + 1 < axis.size(); ++j) heap.push(make(axis[i], axis[i + 1], axis[j], axis[j + 1]));

    double floor = kInf;
    while (!heap.empty()) {
        const Cell top = heap.top();
        if (top.lb >= res.estimate * (1.0 - cfg_.rel_gap)) break;
        if (static_cast<long>(cache_.size() - cache_before) >= cfg_.max_evals) break;
        heap.pop();
        const auto x = split_axis(top.lo1, top.hi1);
        const auto y = split_axis(top.lo2, top.hi2);
        if (x.size() == 2 && y.size() == 2) {
            floor = std::min(floor, top.lb);
            continue;
        }
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            for (std::size_t j = 0; j + 1 < y.size(); ++j) heap.push(make(x[i], x[i + 1], y[j], y[j + 1]));
    }
    res.cost = std::min(floor, heap.empty() ? res.estimate : heap.top().lb);
    res.cost = std::min(res.cost, res.estimate);
    res.evals = static_cast<long>(cache_.size() - cache_before);
    return res;
}

double lower_weighted_cost(const ProblemParams& p, const LowerConfig& cfg) {
    LowerBound lb(p, cfg);
    return lb.minimize(p.q, p.r1, p.r2).cost;
}

}  // namespace lqgduet
