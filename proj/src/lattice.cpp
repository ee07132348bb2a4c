#include "lqgduet/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lqgduet {

double quantize(double step, double y) {
    if (!(step > 0)) throw InvalidArgument("quantizer step must be positive");
    return step * std::floor(y / step + 0.5);
}

double remainder(double step, double y) {
    return y - quantize(step, y);
}

double q_tail(double x) {
    if (x > 38.0)
        return std::exp(-0.5 * x * x) / (x * std::sqrt(2.0 * std::numbers::pi));
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

CombBound make_comb(double d, double w, double o) {
    if (!(d > 0)) throw InvalidArgument("comb spacing must be positive");
    if (!(w >= 0)) throw InvalidArgument("comb width must be nonnegative");
    if (!(o >= 0 && o <= 1)) throw InvalidArgument("comb outage must lie in [0, 1]");
    if (std::isfinite(d) && !(d > w)) throw InvalidArgument("comb width must be below its spacing");
    return CombBound{d, w, o};
}

CombBound comb_add(const CombBound& b1, const CombBound& b2) {
    if (std::isfinite(b2.d) && b2.d != b1.d)
        throw InvalidArgument("comb_add needs the second spacing infinite or equal to the first");
    return make_comb(b1.d, b1.w + b2.w, std::min(1.0, b1.o + b2.o));
}

CombBound comb_scale(double k, const CombBound& b) {
    if (!(k > 0)) throw InvalidArgument("comb_scale factor must be positive");
    return CombBound{k * b.d, k * b.w, b.o};
}

CombBound gaussian_comb(double w, double sigma) {
    if (!(w >= 0) || !(sigma >= 0)) throw InvalidArgument("gaussian_comb needs w, sigma >= 0");
    if (sigma == 0) return CombBound{kInf, w, w > 0 ? 0.0 : 1.0};
    return CombBound{kInf, w, std::min(1.0, 2.0 * q_tail(w / (2.0 * sigma)))};
}

bool comb_member(const CombBound& b, double x) {
    if (!std::isfinite(b.d)) return std::fabs(x) <= 0.5 * b.w;
    return std::fabs(remainder(b.d, x)) <= 0.5 * b.w;
}

double quantized_mmse_bound(const CombBound& b, double residual_msq, double sigma,
                            const SeriesOptions& opt) {
    if (!std::isfinite(b.d)) throw InvalidArgument("quantized_mmse_bound needs a finite spacing");
    if (!(b.d > b.w)) throw InvalidArgument("quantized_mmse_bound needs d > w");
    if (!(residual_msq >= 0)) throw InvalidArgument("residual_msq must be nonnegative");
    if (!(sigma > 0)) throw InvalidArgument("sigma must be positive");
    const double d = b.d;
    const double w = b.w;
    const double in_box = sum_series(
        [&](long i) {
            const double m = static_cast<double>(i) * d + 0.5 * w;
            return m * m * 2.0 * q_tail((static_cast<double>(2 * i - 1) * d - w) / (2.0 * sigma));
        },
        1, opt);
    double outage = 0.0;
    if (b.o > 0) {
        const double tail = sum_series(
            [&](long i) {
                const double m = (static_cast<double>(i) + 0.5) * d;
                return m * m * 2.0 * q_tail(static_cast<double>(i - 1) * d / sigma);
            },
            2, opt);
        outage = b.o * (2.25 * d * d + tail);
    }
    return residual_msq + in_box + outage;
}

}  // namespace lqgduet
