#include "lqgduet/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "lqgduet/bounds_upper.hpp"

namespace lqgduet {

void validate(const SweepConfig& cfg) {
    if (cfg.points < 1) throw InvalidArgument("sweep needs at least one point");
    if (!(cfg.l_min <= cfg.l_max)) throw InvalidArgument("sweep needs l_min <= l_max");
    if (cfg.points == 1 && cfg.l_min != cfg.l_max) throw InvalidArgument("a single point needs l_min == l_max");
    validate(sweep_params(cfg));
}

ProblemParams sweep_params(const SweepConfig& cfg) {
    ProblemParams p;
    p.a = cfg.a;
    p.q = cfg.q;
    p.r1 = 1.0;
    p.r2 = 0.0;
    p.sigmav1_sq = cfg.sigmav1_sq;
    p.sigmav2_sq = cfg.sigmav2_sq < 0 ? cfg.a : cfg.sigmav2_sq;
    return p;
}

std::vector<SweepRow> dof_sweep(const SweepConfig& cfg, const LowerConfig& lower_cfg) {
    validate(cfg);
    ProblemParams p = sweep_params(cfg);
    const auto cands = upper_candidates(p);
    LowerBound lower(p, lower_cfg);
    std::vector<SweepRow> rows;
    for (int i = 0; i < cfg.points; ++i) {
        SweepRow row;
        row.l = cfg.points == 1 ? cfg.l_min : cfg.l_min + (cfg.l_max - cfg.l_min) * i / (cfg.points - 1);
        row.r1 = std::pow(std::fabs(cfg.a), row.l);
        p.r1 = row.r1;
        for (const auto& c : cands) {
            const double w = weighted(p, c.point);
            const std::string label = strategy_label(c.spec);
            double* slot = label == "linbb1" ? &row.linbb1 : label == "linbb2" ? &row.linbb2 : label == "sig" ? &row.sig : nullptr;
            if (slot) *slot = std::min(*slot, w);
        }
        row.upper = std::min({row.linbb1, row.sig, row.linbb2});
        row.argmin = row.upper == row.linbb1 ? "linbb1" : row.upper == row.sig ? "sig" : "linbb2";
        if (cfg.with_lower) row.lower = lower.minimize(p.q, p.r1, p.r2).cost;
        rows.push_back(row);
    }
    return rows;
}

int label_changes(const std::vector<SweepRow>& rows) {
    int n = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) n += rows[i].argmin != rows[i - 1].argmin;
    return n;
}

}  // namespace lqgduet
