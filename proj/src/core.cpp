#include "lqgduet/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace lqgduet {

std::string Regime::label() const {
    if (kind == Kind::WeaklyDegraded) return "weak";
    return "strong(s=" + std::to_string(s) + ")";
}

void validate(const ProblemParams& p) {
    if (!std::isfinite(p.a)) throw InvalidArgument("a must be finite");
    if (!(p.q >= 0 && p.r1 >= 0 && p.r2 >= 0))
        throw InvalidArgument("cost weights q, r1, r2 must be nonnegative");
    if (!(p.sigma0_sq >= 0 && p.sigmav1_sq >= 0 && p.sigmav2_sq >= 0))
        throw InvalidArgument("variances must be nonnegative");
    if (p.sigmav1_sq > p.sigmav2_sq)
        throw InvalidArgument("sigmav1_sq must not exceed sigmav2_sq");
}

ProblemParams normalize(const RawParams& raw) {
    if (!(raw.sigmaw_sq > 0)) throw InvalidArgument("sigmaw_sq must be positive");
    if (raw.b1 == 0 || raw.b2 == 0 || raw.c1 == 0 || raw.c2 == 0)
        throw InvalidArgument("input and observation gains must be nonzero");
    if (!(raw.q >= 0 && raw.r1 >= 0 && raw.r2 >= 0))
        throw InvalidArgument("cost weights q, r1, r2 must be nonnegative");
    if (!(raw.sigma0_sq >= 0 && raw.sigmav1_sq >= 0 && raw.sigmav2_sq >= 0))
        throw InvalidArgument("variances must be nonnegative");

    const double sw2 = raw.sigmaw_sq;
    ProblemParams p;
    p.a = raw.a;
    p.q = raw.q * sw2;
    p.r1 = raw.r1 * sw2 / (raw.b1 * raw.b1);
    p.r2 = raw.r2 * sw2 / (raw.b2 * raw.b2);
    p.sigma0_sq = raw.sigma0_sq / sw2;
    p.sigmav1_sq = raw.sigmav1_sq / (raw.c1 * raw.c1 * sw2);
    p.sigmav2_sq = raw.sigmav2_sq / (raw.c2 * raw.c2 * sw2);
    if (p.sigmav1_sq > p.sigmav2_sq) {
        std::swap(p.sigmav1_sq, p.sigmav2_sq);
        std::swap(p.r1, p.r2);
    }
    return p;
}

double first_noise_scale(const ProblemParams& p) {
    return std::max(1.0, p.a * p.a * p.sigmav1_sq);
}

Regime classify(const ProblemParams& p) {
    const double aa = std::fabs(p.a);
    if (!(aa > 1)) throw InvalidArgument("classify requires |a| > 1");
    const double m = first_noise_scale(p);
    const double v = p.sigmav2_sq;
    if (v <= m) return Regime{};
    const double a2 = aa * aa;
    int s = static_cast<int>(std::ceil(std::log(v / m) / (2.0 * std::log(aa))));
    s = std::max(s, 1);
    auto lo = [&](int t) { return std::pow(a2, t - 1) * m; };
    auto hi = [&](int t) { return std::pow(a2, t) * m; };
    while (s > 1 && v <= lo(s)) --s;
    while (v > hi(s)) ++s;
    return Regime{Regime::Kind::StronglyDegraded, s};
}

int select_stage(const ProblemParams& p) {
    const Regime r = classify(p);
    if (!r.strong()) throw InvalidArgument("select_stage requires the strongly degraded regime");
    return r.s;
}

}  // namespace lqgduet
