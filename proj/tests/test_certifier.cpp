#include <cmath>
#include <random>

#include "doctest.h"
#include "lqgduet/certifier.hpp"
#include "test_util.hpp"

using namespace lqgduet;
using testutil::params;

TEST_CASE("ratio_transfer_check examples") {
    const TradeoffFn dl = [](double x, double y) { return 1.0 + 1.0 / (1.0 + x + y); };
    std::vector<PowerPair> grid;
    for (double x : {0.0, 0.1, 1.0, 10.0})
        for (double y : {0.0, 0.5, 5.0}) grid.emplace_back(x, y);
    CHECK(ratio_transfer_check(dl, dl, 1.0, grid));
    const TradeoffFn flat = [](double, double) { return 3.0; };
    const TradeoffFn twice = [](double, double) { return 6.0; };
    CHECK(ratio_transfer_check(twice, flat, 2.0, grid));
    CHECK_FALSE(ratio_transfer_check(twice, flat, 1.5, grid));
    CHECK_THROWS_AS(ratio_transfer_check(dl, dl, 0.5, grid), InvalidArgument);
}

TEST_CASE("region constants") {
    CHECK(region_constant("weak(ii)") == 1200);
    CHECK(region_constant("strong(iv)") == doctest::Approx(6656.0 / 0.0457));
    CHECK(region_constant("strong(iv)") < kStrongCap);
    CHECK(region_constant("strong(v)") == 60000);
}

TEST_CASE("region labels partition the power quadrant") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> e(-6, 14);
    for (const ProblemParams& p : {params(2.5, 1, 97.65625), params(25, 0, 15625), params(5, 1, 10)}) {
        const std::vector<std::string> valid = classify(p).strong()
            ? std::vector<std::string>{"strong(i)", "strong(ii)", "strong(iii)", "strong(iv)", "strong(v)"}
            : std::vector<std::string>{"weak(i)", "weak(ii)", "weak(iii)"};
        for (int i = 0; i < 2000; ++i) {
            const std::string l = region_label(p, std::pow(10.0, e(rng)), std::pow(10.0, e(rng)));
            CHECK(std::count(valid.begin(), valid.end(), l) == 1);
        }
    }
}

TEST_CASE("region transfer checks hold with the case constants") {
    for (const ProblemParams& p :
         {params(2.5, 0, 6.25), params(2.5, 1, 97.65625), params(5, 10, 781250), params(100, 0, 100), params(25, 1, 62.5),
          params(5, 0, 0.1), params(2000, 0, 5e4)})
        for (const auto& rc : region_transfer_checks(p, 2)) {
            INFO(rc.label, " a=", p.a, " sv2=", p.sigmav2_sq);
            CHECK(rc.pass);
        }
}

TEST_CASE("certify_point bounds are ordered") {
    for (const ProblemParams& p : {params(2.5, 1, 15.625, 1, 1, 1), params(5, 0, 5, 1e-3, 1e3, 1), params(5, 1, 10, 1, 1e-3, 1e3)}) {
        const CertReport r = certify_point(p);
        CHECK(r.upper >= r.lower);
        CHECK(r.ratio >= 1);
        CHECK(r.pass);
        CHECK(r.cap == default_cap(r.regime));
        CHECK_FALSE(r.case_label.empty());
    }
}

TEST_CASE("certify_point flags the all-zero weights as degenerate") {
    const CertReport r = certify_point(params(5, 1, 10, 0, 0, 0));
    CHECK(r.degenerate);
    CHECK_FALSE(r.pass);
    CHECK_THROWS_AS(certify_point(params(2, 0, 10)), InvalidArgument);
}

TEST_CASE("desk grid composition") {
    CHECK(desk_grid(GridScope::Strong).size() == 36);
    CHECK(desk_grid(GridScope::Weak).size() == 18);
    CHECK(desk_grid(GridScope::All).size() == 54);
    for (const auto& p : desk_grid(GridScope::Strong)) CHECK(classify(p).strong());
    for (const auto& p : desk_grid(GridScope::Weak)) CHECK_FALSE(classify(p).strong());
    CHECK(weight_grid().size() == 27);
    CHECK_THROWS_AS(parse_grid_scope("medium"), InvalidArgument);
}

TEST_CASE("prop1 table") {
    CHECK_THROWS_AS(prop1_divergence({5e3}), InvalidArgument);
    const auto rows = prop1_divergence({2e4});
    CHECK(rows[0].linear_lb == doctest::Approx(2e4 * 2e4 * 2e4 / 66));
    CHECK(rows[0].nonlinear_ub == doctest::Approx(3297 * 4e8 * std::log(2e4)));
    CHECK(rows[0].ratio < 1);

    const auto big = prop1_divergence({1e8, 1e9});
    const double factor = big[1].ratio / big[0].ratio;
    CHECK(std::fabs(factor / (10.0 * 8.0 / 9.0) - 1) < 0.05);

    const long double a = 1e6L;
    const long double lin = a * a * a / 66.0L;
    const long double non = 3297.0L * a * a * std::log(a);
    const auto mid = prop1_divergence({1e6});
    CHECK(std::fabs(mid[0].linear_lb / static_cast<double>(lin) - 1) < 1e-12);
    CHECK(std::fabs(mid[0].nonlinear_ub / static_cast<double>(non) - 1) < 1e-12);

    std::vector<double> as;
    for (int i = 0; i < 40; ++i) as.push_back(1e4 * std::pow(10.0, i * 0.2));
    const auto seq = prop1_divergence(as);
    for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i].log_ratio > seq[i - 1].log_ratio);
}

TEST_CASE("prop1 parameters") {
    const ProblemParams p = prop1_params(1e4);
    CHECK(p.r1 == 1e4);
    CHECK(p.sigmav2_sq == 1e4);
    CHECK(p.sigmav1_sq == 0);
}
