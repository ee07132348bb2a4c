#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lqgduet/bounds_lower.hpp"
#include "lqgduet/bounds_upper.hpp"
#include "lqgduet/core.hpp"

namespace lqgduet {

inline constexpr double kWeakCap = 1200.0;
inline constexpr double kStrongCap = 1.5e5;

struct CertReport {
    ProblemParams params;
    Regime regime;
    double upper = kInf;
    double lower = 0.0;
    double ratio = kInf;
    std::string case_label;
    bool pass = false;
    bool degenerate = false;
    std::string upper_strategy;
    double P1t = 0.0;  // power pair attaining the lower-bound estimate
    double P2t = 0.0;
    double cap = 0.0;
};

using TradeoffFn = std::function<double(double, double)>;
using PowerPair = std::pair<double, double>;

bool ratio_transfer_check(const TradeoffFn& DU, const TradeoffFn& DL, double c, const std::vector<PowerPair>& grid);

double default_cap(const Regime& r);

// Region of the case partition containing the power pair.
std::string region_label(const ProblemParams& p, double P1, double P2);

// Piecewise closed-form converse over the region partition.
double closed_form_lower_tradeoff(const ProblemParams& p, double P1, double P2);

// Smallest analytic disturbance whose power requirements fit within (X1, X2).
double closed_form_upper_tradeoff(const ProblemParams& p, double X1, double X2);

// Region constant from the case analysis.
double region_constant(const std::string& label);

struct RegionCheck {
    std::string label;
    double c = 0.0;
    long points = 0;
    bool pass = true;
};

std::vector<RegionCheck> region_transfer_checks(const ProblemParams& p, int per_decade = 4);

CertReport certify_point(const ProblemParams& p, double cap = 0.0);

CertReport certify_with(const ProblemParams& p, LowerBound& lower, const std::vector<UpperCandidate>& cands,
                        double cap = 0.0);

enum class GridScope { Strong, Weak, All };

GridScope parse_grid_scope(const std::string& text);

// Unit-weight parameter sets of the desk-scale certification grid.
std::vector<ProblemParams> desk_grid(GridScope scope);

// The 27 (q, r1, r2) weight triples over {1e-3, 1, 1e3}^3.
std::vector<std::array<double, 3>> weight_grid();

struct GridSummary {
    std::vector<CertReport> reports;
    std::vector<RegionCheck> regions;
    long failures = 0;
    long region_failures = 0;
    double worst_strong = 0.0;
    double worst_weak = 0.0;
};

using GridProgress = std::function<void(const CertReport&)>;

GridSummary certify_grid(const std::vector<ProblemParams>& bases, double strong_cap = kStrongCap,
                         double weak_cap = kWeakCap, const GridProgress& progress = {});

struct Prop1Row {
    double a = 0.0;
    double linear_lb = 0.0;
    double nonlinear_ub = 0.0;
    double ratio = 0.0;
    double log_ratio = 0.0;
};

inline constexpr double kProp1MinA = 1e4;

std::vector<Prop1Row> prop1_divergence(const std::vector<double>& a_values, bool natural_log = true);

// Parameters of the divergence example: q = 1, r1 = a, r2 = 0, sigma_v1 = 0, sigma_v2^2 = a.
ProblemParams prop1_params(double a);

}  // namespace lqgduet
