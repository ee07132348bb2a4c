#include "lqgduet/detmodel.hpp"

#include <algorithm>
#include <iterator>

#include "lqgduet/core.hpp"

namespace lqgduet {

Provenance xor_prov(const Provenance& a, const Provenance& b) {
    Provenance out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::string level_string(const Level& l) { return l ? std::to_string(*l) : "-inf"; }

BitWord::BitWord(int lo, int hi) : lo_(lo), hi_(hi), bits_(static_cast<std::size_t>(hi - lo)) {
    if (hi <= lo) throw InvalidArgument("bit window must be nonempty");
}

const Provenance& BitWord::at(int i) const {
    static const Provenance kEmpty;
    if (i < lo_ || i >= hi_) return kEmpty;
    return bits_[static_cast<std::size_t>(i - lo_)];
}

void BitWord::xor_at(int i, const Provenance& p) {
    if (p.empty()) return;
    if (i < lo_) return;
    if (i >= hi_) throw InvalidArgument("bit level " + std::to_string(i) + " overflows the tracked window");
    auto& b = bits_[static_cast<std::size_t>(i - lo_)];
    b = xor_prov(b, p);
}

void BitWord::xor_word(const BitWord& other) {
    for (int i = other.lo(); i < other.hi(); ++i) xor_at(i, other.at(i));
}

bool BitWord::empty() const {
    return std::all_of(bits_.begin(), bits_.end(), [](const Provenance& p) { return p.empty(); });
}

Level BitWord::upper_level() const {
    for (int i = hi_ - 1; i >= lo_; --i)
        if (!at(i).empty()) return i + 1;
    return std::nullopt;
}

BitWord BitWord::shifted(int shift) const {
    BitWord out(lo_, hi_);
    for (int i = lo_; i < hi_; ++i) out.xor_at(i + shift, at(i));
    return out;
}

BitWord BitWord::masked(int lo_keep, int hi_keep) const {
    BitWord out(lo_, hi_);
    for (int i = std::max(lo_, lo_keep); i < std::min(hi_, hi_keep); ++i) out.xor_at(i, at(i));
    return out;
}

std::vector<std::vector<SourceId>> BitWord::signature(int now) const {
    std::vector<std::vector<SourceId>> out;
    for (const auto& b : bits_) {
        std::vector<SourceId> rel;
        for (const auto& s : b) rel.push_back(SourceId{now - s.time, s.level, s.kind});
        std::sort(rel.begin(), rel.end());
        out.push_back(std::move(rel));
    }
    return out;
}

void validate(const DetParams& p) {
    if (p.a_prime < 1) throw InvalidArgument("a_prime must be at least 1");
    if (p.window_lo > -p.a_prime - 2)
        throw InvalidArgument("window_lo must be at most -a_prime - 2 so dropped bits stay masked");
    if (p.window_hi <= std::max({p.p1_level, p.sigma_v2_level, 0}) + 2 * p.a_prime)
        throw InvalidArgument("window_hi too small for the shift");
}

std::string det_strategy_name(DetStrategy s) { return s == DetStrategy::Optimal ? "optimal" : "linear"; }

BitWord det_zero_state(const DetParams& p) { return BitWord(p.window_lo, p.window_hi); }

namespace {

BitWord fresh(int lo, int hi, int below, int time, SourceId::Kind kind) {
    BitWord w(lo, hi);
    for (int i = lo; i < std::min(below, hi); ++i) w.xor_at(i, {SourceId{time, i, kind}});
    return w;
}

}  // namespace

BitWord det_noise(const DetParams& p, int n) {
    return fresh(p.window_lo, p.window_hi, p.sigma_v2_level, n, SourceId::Kind::V);
}

BitWord det_step(const DetParams& p, DetStrategy strategy, const BitWord& x, int n) {
    validate(p);
    const int a = p.a_prime;
    const BitWord& y1 = x;
    BitWord y2 = x;
    y2.xor_word(det_noise(p, n));

    BitWord next = x.shifted(a);
    if (strategy == DetStrategy::Optimal) {
        next.xor_word(y1.shifted(a).masked(p.window_lo, p.p1_level));
        next.xor_word(y2.masked(p.sigma_v2_level, p.window_hi).shifted(a));
    } else {
        if (const Level top = x.upper_level()) next.xor_word(y1.shifted(p.p1_level - *top));
        if (!x.masked(p.sigma_v2_level, p.window_hi).empty()) next.xor_word(y2.shifted(a));
    }
    next.xor_word(fresh(p.window_lo, p.window_hi, 0, n, SourceId::Kind::W));
    return next;
}

DetRun det_run(const DetParams& p, DetStrategy strategy, int steps) {
    validate(p);
    DetRun run;
    BitWord x = det_zero_state(p);
    run.levels.push_back(x.upper_level());
    std::vector<std::vector<std::vector<SourceId>>> sigs{x.signature(0)};
    for (int n = 0; n < steps; ++n) {
        x = det_step(p, strategy, x, n);
        run.levels.push_back(x.upper_level());
        sigs.push_back(x.signature(n + 1));
        if (run.periodic_from < 0 && sigs[sigs.size() - 1] == sigs[sigs.size() - 2]) run.periodic_from = n;
    }
    run.steady = run.levels.back();
    int first = static_cast<int>(run.levels.size()) - 1;
    while (first > 0 && run.levels[static_cast<std::size_t>(first - 1)] == run.steady) --first;
    run.settled_from = first;
    return run;
}

namespace {

BitWord initial_state(const DetSingleStage& p) {
    return fresh(p.window_lo, p.window_hi, p.x0_levels_below, 0, SourceId::Kind::X0);
}

}  // namespace

Level det_radner(const DetSingleStage& p) {
    const BitWord x0 = initial_state(p);
    BitWord y2 = x0;
    y2.xor_word(fresh(p.window_lo, p.window_hi, p.v_levels_below, 0, SourceId::Kind::V));
    BitWord x1 = x0;
    x1.xor_word(x0.masked(p.window_lo, p.u1_power_level));
    x1.xor_word(y2.masked(p.v_levels_below, p.window_hi));
    return x1.upper_level();
}

Level det_witsen(const DetSingleStage& p, bool first_controller_active) {
    const BitWord x0 = initial_state(p);
    BitWord x1 = x0;
    if (first_controller_active) x1.xor_word(x0.masked(p.window_lo, p.u1_power_level));
    BitWord y2 = x1;
    y2.xor_word(fresh(p.window_lo, p.window_hi, p.v_levels_below, 1, SourceId::Kind::V));
    BitWord x2 = x1;
    x2.xor_word(y2.masked(p.v_levels_below, p.window_hi));
    return x2.upper_level();
}

}  // namespace lqgduet
