#pragma once

#include "lqgduet/core.hpp"

namespace lqgduet {

struct CombBound {
    double d = kInf;
    double w = 0.0;
    double o = 0.0;
};

struct SeriesOptions {
    double rel_tol = 1e-12;
    long max_terms = 1000000;
    long stall_terms = 1000;
};

double quantize(double step, double y);
double remainder(double step, double y);

// Standard Gaussian upper tail.
double q_tail(double x);

CombBound make_comb(double d, double w, double o);
CombBound comb_add(const CombBound& b1, const CombBound& b2);
CombBound comb_scale(double k, const CombBound& b);
CombBound gaussian_comb(double w, double sigma);

// True when x lies within w/2 of some multiple of d (any point when d is infinite: |x| <= w/2).
bool comb_member(const CombBound& b, double x);

double quantized_mmse_bound(const CombBound& b, double residual_msq, double sigma,
                            const SeriesOptions& opt = {});

// Sums term(i) for i = first, first+1, ... under the truncation contract of SeriesOptions.
template <class F>
double sum_series(F&& term, long first, const SeriesOptions& opt = {}) {
    double sum = 0.0;
    double prev = kInf;
    long since_decrease = 0;
    for (long n = 0; n < opt.max_terms; ++n) {
        const double t = term(first + n);
        sum += t;
        if (t == 0.0 && (sum == 0.0 || t < prev)) break;
        if (t < prev) {
            since_decrease = 0;
            if (t <= opt.rel_tol * sum) break;
        } else if (++since_decrease >= opt.stall_terms) {
            throw SeriesNonConvergence("series terms still growing after " +
                                       std::to_string(opt.stall_terms) + " terms");
        }
        prev = t;
    }
    return sum;
}

}  // namespace lqgduet
