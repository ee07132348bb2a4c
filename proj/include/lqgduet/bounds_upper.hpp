#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lqgduet/core.hpp"
#include "lqgduet/lattice.hpp"
#include "lqgduet/simulator.hpp"
#include "lqgduet/strategies.hpp"

namespace lqgduet {

struct SigDesign {
    int s = 1;
    double d = 1.0;
    double w1 = 0.1;
};

// Sum of the quantization drift width and w1.
double sig_box_width(double a, const SigDesign& design);

// Throws InvalidArgument naming the violated inequality.
void check_feasible(double a, const SigDesign& design);

TradeoffPoint du1(const ProblemParams& p, const SigDesign& design, const SeriesOptions& opt = {});

TradeoffPoint linbb_bound(const ProblemParams& p, int controller);

struct PowerBracket {
    double lo = 0.0;
    double hi = 0.0;
};

PowerBracket simplified_bracket(const ProblemParams& p, int s);

TradeoffPoint simplified_upper(const ProblemParams& p, int s, double P);

// Design at which the simplified bound is evaluated against du1.
SigDesign simplified_design(const ProblemParams& p, int s, double P);

struct UpperCandidate {
    StrategySpec spec;
    TradeoffPoint point;
    std::optional<SigDesign> design;
};

// Weight-independent candidate set searched by optimize_upper.
std::vector<UpperCandidate> upper_candidates(const ProblemParams& p);

struct UpperResult {
    double cost = kInf;
    StrategySpec spec;
    TradeoffPoint point;
    std::optional<SigDesign> design;
};

UpperResult best_upper(const ProblemParams& p, const std::vector<UpperCandidate>& cands);

UpperResult optimize_upper(const ProblemParams& p);

}  // namespace lqgduet
