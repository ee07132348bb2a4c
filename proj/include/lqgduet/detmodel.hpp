#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lqgduet {

struct SourceId {
    enum class Kind : char { W = 'w', V = 'v', X0 = 'x' };
    int time = 0;
    int level = 0;
    Kind kind = Kind::W;

    auto operator<=>(const SourceId&) const = default;
};

// XOR combination of independent source bits; empty means the bit is deterministically 0.
using Provenance = std::vector<SourceId>;

Provenance xor_prov(const Provenance& a, const Provenance& b);

// Upper level of a bit word; nullopt stands for minus infinity.
using Level = std::optional<int>;

std::string level_string(const Level& l);

class BitWord {
public:
    BitWord(int lo, int hi);

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    const Provenance& at(int i) const;
    void xor_at(int i, const Provenance& p);
    void xor_word(const BitWord& other);
    bool empty() const;
    Level upper_level() const;

    // Copy with bit i moved to i + shift; bits leaving the window below are dropped.
    BitWord shifted(int shift) const;
    // Bits with lo_keep <= i < hi_keep, all others cleared.
    BitWord masked(int lo_keep, int hi_keep) const;
    // Relative-time form used for periodicity checks.
    std::vector<std::vector<SourceId>> signature(int now) const;

    bool operator==(const BitWord&) const = default;

private:
    int lo_;
    int hi_;
    std::vector<Provenance> bits_;
};

struct DetParams {
    int a_prime = 2;
    int sigma_v2_level = 1;
    int p1_level = 1;
    int window_lo = -16;
    int window_hi = 24;
};

void validate(const DetParams& p);

enum class DetStrategy { Optimal, LinearShift };

std::string det_strategy_name(DetStrategy s);

BitWord det_zero_state(const DetParams& p);

// Noise word v^n of the second observation.
BitWord det_noise(const DetParams& p, int n);

BitWord det_step(const DetParams& p, DetStrategy strategy, const BitWord& state, int n);

struct DetRun {
    std::vector<Level> levels;  // upper level of x^n for n = 0..steps
    Level steady;               // final level of the trailing constant run
    int settled_from = -1;      // first n after which the level never changes
    int periodic_from = -1;     // first n with signature(x^n) == signature(x^(n+1))
};

DetRun det_run(const DetParams& p, DetStrategy strategy, int steps);

struct DetSingleStage {
    int x0_levels_below = 2;
    int v_levels_below = 1;
    int u1_power_level = 1;
    int window_lo = -16;
    int window_hi = 8;
};

Level det_radner(const DetSingleStage& p = {});
Level det_witsen(const DetSingleStage& p = {}, bool first_controller_active = true);

}  // namespace lqgduet
