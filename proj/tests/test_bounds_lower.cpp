#include <cmath>
#include <random>

#include "doctest.h"
#include "lqgduet/bounds_lower.hpp"
#include "lqgduet/bounds_upper.hpp"
#include "test_util.hpp"

using namespace lqgduet;
using testutil::params;

TEST_CASE("info_mmse examples") {
    CHECK(info_mmse(2.5, 0, 10, 3, 4) == 0);
    CHECK(info_mmse(2.5, 1, 1e300, 1, 1) == doctest::Approx(0.5));
    CHECK(info_mmse(2.5, 1, 1, 1, 1) == doctest::Approx(1.0 / 3));
    CHECK(info_mmse(2.5, 1, 0, 2, 2) == 0);
}

TEST_CASE("info_mmse lower-bounds the Kalman prediction error") {
    // Unit prior on the first state, k1 rounds of both observations, prediction to step k.
    for (double a : {2.5, 4.0, 10.0})
        for (double s1 : {0.1, 1.0, 10.0})
            for (double f : {1.0, 4.0, 100.0})
                for (int k1 : {1, 2, 3, 5})
                    for (int k = k1; k < k1 + 4; ++k) {
                        const double s2 = f * s1;
                        const double r = s1 * s2 / (s1 + s2);
                        double P = 1;
                        for (int n = 1; n <= k1; ++n) {
                            P = P * r / (P + r);
                            if (n < k1) P = a * a * P + 1;
                        }
                        for (int n = k1; n < k; ++n) P = a * a * P + 1;
                        CHECK(info_mmse(a, s1, s2, k1, k) <= P * (1 + 1e-12));
                    }
}

TEST_CASE("power_expand examples") {
    CHECK(power_expand(2, 0.4, {3.0}) == 3.0);
    CHECK(power_expand(2, 0.4, {0.0, 0.0, 0.0}) == 0.0);
    CHECK(power_expand(2, 0.4, {1.0, 1.0}) == doctest::Approx(9.1));
    CHECK_THROWS_AS(power_expand(2, 0.2, {1.0, 1.0}), InvalidArgument);
}

TEST_CASE("power_expand dominates the worst-case expansion") {
    // (sum a^{n-1-i} X_i)^2 <= prefactor * sum b^i X_i^2 by Cauchy-Schwarz.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0, 1);
    for (int n = 1; n <= 6; ++n)
        for (int t = 0; t < 200; ++t) {
            const double a = 2.5, b = 0.5;
            std::vector<double> x(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n));
            double lhs = 0;
            for (int i = 0; i < n; ++i) {
                x[static_cast<std::size_t>(i)] = g(rng);
                e[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
                lhs += std::pow(a, n - 1 - i) * x[static_cast<std::size_t>(i)];
            }
            CHECK(lhs * lhs <= power_expand(a, b, e) * (1 + 1e-12));
        }
}

TEST_CASE("mutual information examples") {
    CHECK(mutual_info_Ik(2.5, 0, 1, 3, 0.4, 0) == 0);
    CHECK(mutual_info_Ik(2.5, 1, 1, 0, 0.4, 1) == 0);
    const double a = 2.5, w = 0.4;
    const double g = 1 - 1 / (a * a);
    const double expect = 0.5 * std::log2(1 + (2 * 1 / g + 2 * std::pow(a, -2) / g / ((1 - 1 / (a * a * w)) * (1 - w))));
    CHECK(mutual_info_Ik(a, 1, 1, 1, w, 1) == doctest::Approx(expect).epsilon(1e-14));
    CHECK_THROWS_AS(mutual_info_Ik(2.5, 1, 1, 1, 0.1, 1), InvalidArgument);
    CHECK_THROWS_AS(mutual_info_Ik(2.5, 1, 1, 1, 1.0, 1), InvalidArgument);
}

TEST_CASE("two-step linear schemes respect the information bound") {
    // y1 = x0 + v1, then a genie control u1 = c x0 with power c^2 s0 <= P gives
    // y2 = (a + c) x0 + v2. The joint MMSE must be at least s0 / 2^(2 I_2).
    const double a = 2.5, w = 0.4, s0 = 1, sv = 1;
    for (double P : {0.1, 1.0, 10.0, 100.0}) {
        const double bound = s0 / std::exp2(2 * mutual_info_Ik(a, s0, sv, 2, w, P));
        for (int i = 0; i <= 100; ++i) {
            const double c = std::sqrt(i / 100.0 * P / s0);
            for (double gain : {a + c, a - c}) {
                const double mmse = s0 / (1 + s0 / sv + gain * gain * s0 / sv);
                CHECK(mmse >= bound);
            }
        }
    }
}

TEST_CASE("mutual information primes") {
    const double a = 3, s0 = 2, sv = 1.5, w = 0.5, P = 4;
    for (int k = 1; k <= 4; ++k) {
        const double prev = mutual_info_Ik(a, s0, sv, k - 1, w, P);
        CHECK(mutual_info_Ik_prime(a, s0, sv, k, w, P, 1e300) == doctest::Approx(prev).epsilon(1e-12));
        const double ip = mutual_info_Ik_prime(a, s0, sv, k, w, P, 2.0);
        const long double a2 = static_cast<long double>(a) * a;
        const long double x = 2 * std::pow(a2, k - 1) * s0 + 2 * (std::pow(a2, k - 2) / (1 - 1 / (a2 * w))) * P / (1 - w);
        const long double ref = static_cast<long double>(prev) + 0.5L * std::log2(1 + x / 2.0L);
        CHECK(std::fabs(ip - static_cast<double>(ref)) <= 1e-12 * std::fabs(ip));
        CHECK(mutual_info_Ik_doubleprime(a, s0, sv, k, w, P, 2.0) ==
              doctest::Approx(ip + 0.5 * std::log2(M_PI * M_E / 2)).epsilon(1e-14));
    }
}

TEST_CASE("mutual information is monotone") {
    double prev = -1;
    for (double P : {0.0, 0.1, 1.0, 10.0, 100.0}) {
        const double v = mutual_info_Ik(2.5, 1, 1, 3, 0.4, P);
        CHECK(v >= 0);
        CHECK(v >= prev);
        prev = v;
    }
    prev = -1;
    for (double s0 : {0.0, 0.1, 1.0, 10.0}) {
        const double v = mutual_info_Ik(2.5, s0, 1, 3, 0.4, 1);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("large deviation constant") {
    CHECK(large_deviation_c(4, 4) == 1);
    for (double r : {0.01, 0.1, 0.5, 2.0, 10.0, 100.0}) {
        const double c = large_deviation_c(4, 4 * r);
        CHECK(c > 0);
        CHECK(c <= 1);
    }
}

TEST_CASE("dl1 clamps to one at large powers") {
    const ProblemParams p = params(2.5, 1, 39.0625);
    SliceParams sp{3, 5, 5, p.sigmav2_sq, 1.0, 1.0};
    CHECK(dl1(p, sp, 1e12, 1e12) == 1);
    sp.alpha = 0.5;
    CHECK(dl1(p, sp, 1e12, 1e12) == 1);
}

TEST_CASE("dl1 ignores the second input on an empty power-limited interval") {
    const ProblemParams p = params(2.5, 1, 39.0625);
    const SliceParams sp{3, 5, 5, p.sigmav2_sq, 1.0, 1.0};
    CHECK(dl1(p, sp, 0.3, 0) == dl1(p, sp, 0.3, 1e6));
}

TEST_CASE("dl1 reaches the information-limited estimate") {
    const double a = 2.5;
    const ProblemParams p = params(a, 1, a * a * a * a * 1);
    const int k1 = 3;
    const double Sigma = 0.295 * a * a * p.sigmav1_sq;
    REQUIRE(Sigma <= sigma_cap(p, k1));
    const int s = select_stage(p);
    const SliceParams sp{k1, k1 + s + 1, k1 + s + 1, p.sigmav2_sq, 1.0, Sigma};
    const double P1 = p.sigmav2_sq / (70 * std::pow(a, 2 * (s - 1)));
    CHECK(dl1(p, sp, P1, 0) >= 0.008 * a * a * p.sigmav2_sq + 1);
}

TEST_CASE("dl1 rejects infeasible slices") {
    const ProblemParams p = params(2.5, 1, 39.0625);
    CHECK_THROWS_AS(dl1(p, {1, 1, 2, 1, 1, 0.5}, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(dl1(p, {1, 2, 2, 1, 1, 2.0}, 1, 1), InvalidArgument);
}

TEST_CASE("dl2 with zero powers") {
    const ProblemParams p = params(2.5, 1, 10);
    const double S = 0.7;
    CHECK(dl2(p, 1, 2, S, 0, 0) == doctest::Approx(2.5 * 2.5 * S + 1));
}

TEST_CASE("dl2 collapses with noiseless sensors and ample power") {
    const ProblemParams p = params(2.5, 0, 0);
    CHECK(dl2(p, 1, 3, 1.0, 1e9, 1e9) == 1);
}

TEST_CASE("radner minimizer agrees with a grid search") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 10; ++t) {
        const double a = 2.5 + 5 * u(rng), S = 0.1 + 3 * u(rng), v1 = 2 * u(rng), v2 = 5 * u(rng);
        const double b1 = 3 * u(rng), b2 = 3 * u(rng);
        const RadnerMin m = radner_quadratic_min(a, S, v1, v2, b1, b2);
        double best = kInf;
        const int n = 400;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double c1 = -b1 + 2 * b1 * i / n, c2 = -b2 + 2 * b2 * j / n;
                const double e = a - c1 - c2;
                best = std::min(best, e * e * S + c1 * c1 * v1 + c2 * c2 * v2);
            }
        CHECK(m.value <= best * (1 + 1e-9));
        CHECK(m.value >= best * (1 - 2e-3));
        CHECK(std::fabs(m.c1) <= b1 * (1 + 1e-12));
        CHECK(std::fabs(m.c2) <= b2 * (1 + 1e-12));
    }
}

TEST_CASE("dl3 and dl4 examples") {
    CHECK(dl3(params(2.5, 0, 10), 4) == 1);
    CHECK(dl4(params(2.5, 0, 10), 2, 0, 0) == doctest::Approx(6.25));
    const double a = 2.5;
    for (int k = 2; k <= 8; ++k)
        CHECK(dl4(params(a, 0, 10), k, a * a / 400, a * a / 400) >= 0.6 * std::pow(a, 2 * (k - 1)));
}

TEST_CASE("envelopes are nonincreasing in power") {
    const ProblemParams p = params(5, 1, 3125);
    const double S = std::min(1.0, sigma_cap(p, 2));
    const SliceParams sp{2, 4, 5, p.sigmav2_sq, 0.5, S};
    std::vector<double> grid{0, 1e-2, 1, 10, 100, 1e3, 1e5};
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        for (double y : grid) {
            CHECK(dl1(p, sp, grid[i + 1], y) <= dl1(p, sp, grid[i], y));
            CHECK(dl1(p, sp, y, grid[i + 1]) <= dl1(p, sp, y, grid[i]));
            CHECK(dl2(p, 2, 4, S, grid[i + 1], y) <= dl2(p, 2, 4, S, grid[i], y));
            CHECK(dl2(p, 2, 4, S, y, grid[i + 1]) <= dl2(p, 2, 4, S, y, grid[i]));
            CHECK(dl4(p, 4, grid[i + 1], y) <= dl4(p, 4, grid[i], y));
        }
    LowerBound lb(p);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        for (double y : grid) {
            CHECK(lb.envelope(grid[i + 1], y).value <= lb.envelope(grid[i], y).value);
            CHECK(lb.envelope(y, grid[i + 1]).value <= lb.envelope(y, grid[i]).value);
        }
}

TEST_CASE("envelope reports unbounded branches at zero power") {
    LowerBound lb(params(5, 1, 3125));
    CHECK(std::isinf(lb.envelope(0, 0).value));
    CHECK(std::isfinite(lb.envelope(1e6, 1e6).value));
}

TEST_CASE("lower_weighted_cost special cases") {
    ProblemParams p = params(5, 1, 3125, 0, 1, 1);
    CHECK(lower_weighted_cost(p) == 0);
    for (double a : {2.5, 5.0})
        for (double sv1 : {0.0, 1.0, 10.0}) {
            const double m = std::max(1.0, a * a * sv1);
            ProblemParams w = params(a, sv1, std::max(sv1, 0.5 * m));
            CHECK(lower_weighted_cost(w) >= 0.295 * m);
        }
}

TEST_CASE("lower bound stays below the analytic upper bound") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    LowerConfig cfg;
    cfg.max_evals = 3000;
    for (int t = 0; t < 50; ++t) {
        const double a = 2.5 * std::pow(20.0, u(rng));
        const double sv1 = u(rng) < 0.3 ? 0.0 : std::pow(10.0, -2 + 3 * u(rng));
        const double sv2 = sv1 + std::pow(10.0, -1 + 6 * u(rng));
        const ProblemParams p = params(a, sv1, sv2, std::pow(10.0, -2 + 4 * u(rng)), std::pow(10.0, -3 + 6 * u(rng)),
                                       std::pow(10.0, -3 + 6 * u(rng)));
        CHECK(lower_weighted_cost(p, cfg) <= optimize_upper(p).cost);
    }
}

TEST_CASE("dl1 second branch is absent when k = k1 + 1") {
    const ProblemParams p = params(5, 0, 5);
    SliceParams sp;
    sp.k1 = 1;
    sp.k2 = 2;
    sp.k = 2;
    sp.alpha = 0;
    sp.Sigma = 1;
    sp.sigma_v2_prime_sq = p.sigmav2_sq;
    CHECK(dl1(p, sp, 0, 0) == 1);
    sp.k = 3;
    CHECK(dl1(p, sp, 0, 0) > 1);
}

TEST_CASE("noiseless first observations: lower bound stays below the linear cost") {
    // LinBB(1) with sigma_v1 = 0 attains D = 1 at P1 = a^2.
    for (const ProblemParams& p : {params(5.10543, 0, 5.39079, 4.85159, 0.0101004, 0.00852535),
                                   params(6.97984, 0, 0.83554, 21.7822, 0.460328, 0.0559952),
                                   params(4.09123, 0, 9.84155, 0.0695122, 0.00204897, 0.00361654)}) {
        const double linear = p.q + p.r1 * p.a * p.a;
        CHECK(lower_weighted_cost(p) <= linear);
        LowerBound lb(p);
        CHECK(lb.envelope(p.a * p.a, 0).value <= 1);
    }
}
