#include "doctest.h"
#include "lqgduet/io.hpp"

using namespace lqgduet;

TEST_CASE("problem params round trip") {
    ProblemParams p;
    p.a = 2.5;
    p.q = 0.3;
    p.r1 = 7;
    p.sigmav1_sq = 1;
    p.sigmav2_sq = 10;
    CHECK(problem_from_json(Json::parse(to_json(p).dump())) == p);
}

TEST_CASE("raw params are normalized on load") {
    const Json j = {{"a", 3}, {"b1", 2}, {"r1", 4}, {"sigmav1_sq", 0.5}, {"sigmav2_sq", 2}};
    const ProblemParams p = problem_from_json(j);
    CHECK(p.r1 == doctest::Approx(1));
}

TEST_CASE("config errors carry the field path") {
    try {
        problem_from_json(Json{{"a", "x"}});
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "$.a");
    }
    try {
        problem_from_json(Json{{"q", 1}});
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "$.a");
    }
    try {
        problem_from_json(Json{{"a", 2}, {"bogus", 1}});
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "$.bogus");
    }
    try {
        strategy_from_json(Json{{"type", "sig"}, {"s", 1}}, "$.strategy");
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "$.strategy.d");
    }
}

TEST_CASE("strategy round trip") {
    for (const StrategySpec& s : {StrategySpec{ZeroInput{}}, StrategySpec{LinBB{2}}, StrategySpec{LinKal{1, 1.25}},
                                  StrategySpec{Sig{3, 0.5}}}) {
        const StrategySpec back = strategy_from_json(Json::parse(to_json(s).dump()));
        CHECK(to_json(back) == to_json(s));
    }
    CHECK(std::holds_alternative<LinBB>(parse_strategy("linbb1")));
    const StrategySpec sig = parse_strategy(R"({"type":"sig","s":1,"d":0.5})");
    CHECK(std::get<Sig>(sig).d == 0.5);
    CHECK_THROWS_AS(parse_strategy("bogus"), ConfigError);
    CHECK_THROWS_AS(parse_strategy(R"({"type":"sig","s":0,"d":0.5})"), ConfigError);
}

TEST_CASE("sim config round trip") {
    SimConfig c;
    c.horizon = 5000;
    c.seed = 99;
    const SimConfig back = sim_config_from_json(Json::parse(to_json(c).dump()));
    CHECK(back.horizon == 5000);
    CHECK(back.seed == 99);
    CHECK(back.trials == c.trials);
    CHECK_THROWS_AS(sim_config_from_json(Json{{"horizon", 10}, {"burn_in", 20}}), ConfigError);
}

TEST_CASE("csv schema") {
    const auto cols = simulate_csv_columns();
    CHECK(csv_line(cols) == "a,q,r1,r2,sv1sq,sv2sq,strategy,s,d,k,D,P1,P2,weighted,se_D,se_P1,se_P2");
    ProblemParams p;
    p.a = 2.5;
    SimResult r;
    r.avg_state_cost = 7.25;
    const auto row = simulate_csv_row(p, Sig{2, 0.5}, r);
    CHECK(row.size() == cols.size());
    CHECK(row[6] == "sig");
    CHECK(row[7] == "2");
    CHECK(row[8] == "0.5");
    CHECK(format_double(kInf) == "inf");
}
