#pragma once

#include <string>
#include <vector>

#include "lqgduet/bounds_lower.hpp"
#include "lqgduet/core.hpp"

namespace lqgduet {

struct SweepConfig {
    double a = 100.0;
    double sigmav1_sq = 0.0;
    double sigmav2_sq = -1.0;  // negative selects sigma_v2^2 = a
    double q = 1.0;
    double l_min = -1.0;
    double l_max = 3.0;
    int points = 17;
    bool with_lower = true;
};

struct SweepRow {
    double l = 0.0;
    double r1 = 0.0;
    double linbb1 = kInf;
    double linbb2 = kInf;
    double sig = kInf;
    double upper = kInf;
    std::string argmin;
    double lower = 0.0;
};

void validate(const SweepConfig& cfg);

ProblemParams sweep_params(const SweepConfig& cfg);

// Weighted upper costs per strategy family and the converse along r1 = a^l, r2 = 0.
std::vector<SweepRow> dof_sweep(const SweepConfig& cfg, const LowerConfig& lower_cfg = {});

// Number of positions where consecutive rows have different argmin labels.
int label_changes(const std::vector<SweepRow>& rows);

}  // namespace lqgduet
