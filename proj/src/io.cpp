#include "lqgduet/io.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace lqgduet {

namespace {

double get_number(const Json& j, const std::string& key, const std::string& path, double fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "Infinity") return kInf;
    }
    throw ConfigError(path + "." + key, "expected a number");
}

long get_integer(const Json& j, const std::string& key, const std::string& path, long fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
    return v.get<long>();
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [k, v] : j.items())
        if (!known.contains(k)) throw ConfigError(path + "." + k, "unknown field");
}

Json number_json(double x) { return std::isfinite(x) ? Json(x) : Json(x > 0 ? "inf" : "-inf"); }

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general);
    return std::string(buf, res.ptr);
}

Json to_json(const ProblemParams& p) {
    return {{"a", p.a},          {"q", p.q},
            {"r1", p.r1},        {"r2", p.r2},
            {"sigma0_sq", p.sigma0_sq}, {"sigmav1_sq", p.sigmav1_sq},
            {"sigmav2_sq", p.sigmav2_sq}};
}

Json to_json(const RawParams& p) {
    return {{"a", p.a},   {"b1", p.b1}, {"b2", p.b2}, {"c1", p.c1}, {"c2", p.c2}, {"q", p.q},
            {"r1", p.r1}, {"r2", p.r2}, {"sigma0_sq", p.sigma0_sq}, {"sigmaw_sq", p.sigmaw_sq},
            {"sigmav1_sq", p.sigmav1_sq}, {"sigmav2_sq", p.sigmav2_sq}};
}

Json to_json(const StrategySpec& s) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ZeroInput>) return {{"type", "zero"}};
            else if constexpr (std::is_same_v<T, LinBB>) return {{"type", "linbb"}, {"controller", v.controller}};
            else if constexpr (std::is_same_v<T, LinKal>)
                return {{"type", "linkal"}, {"controller", v.controller}, {"k", v.k}};
            else return {{"type", "sig"}, {"s", v.s}, {"d", v.d}};
        },
        s);
}

Json to_json(const SimConfig& c) {
    return {{"horizon", c.horizon}, {"burn_in", c.burn_in}, {"trials", c.trials},
            {"seed", c.seed},       {"workers", c.workers}, {"allow_stable_a", c.allow_stable_a}};
}

Json to_json(const SimResult& r) {
    return {{"D", number_json(r.avg_state_cost)},  {"P1", number_json(r.avg_u1_power)},
            {"P2", number_json(r.avg_u2_power)},   {"weighted", number_json(r.weighted_cost)},
            {"se_D", number_json(r.se_state)},     {"se_P1", number_json(r.se_u1)},
            {"se_P2", number_json(r.se_u2)},       {"se_weighted", number_json(r.se_weighted)},
            {"unstable", r.unstable},              {"unstable_step", r.unstable_step},
            {"unstable_trial", r.unstable_trial}};
}

ProblemParams problem_from_json(const Json& j, const std::string& path) {
    const std::set<std::string> raw_only{"b1", "b2", "c1", "c2", "sigmaw_sq"};
    reject_unknown(j, {"a", "q", "r1", "r2", "sigma0_sq", "sigmav1_sq", "sigmav2_sq", "b1", "b2", "c1", "c2", "sigmaw_sq"},
                   path);
    if (!j.contains("a")) throw ConfigError(path + ".a", "missing required field");
    bool raw = false;
    for (const auto& k : raw_only) raw = raw || j.contains(k);
    try {
        if (raw) {
            RawParams r;
            r.a = get_number(j, "a", path, r.a);
            r.b1 = get_number(j, "b1", path, r.b1);
            r.b2 = get_number(j, "b2", path, r.b2);
            r.c1 = get_number(j, "c1", path, r.c1);
            r.c2 = get_number(j, "c2", path, r.c2);
            r.q = get_number(j, "q", path, r.q);
            r.r1 = get_number(j, "r1", path, r.r1);
            r.r2 = get_number(j, "r2", path, r.r2);
            r.sigma0_sq = get_number(j, "sigma0_sq", path, r.sigma0_sq);
            r.sigmaw_sq = get_number(j, "sigmaw_sq", path, r.sigmaw_sq);
            r.sigmav1_sq = get_number(j, "sigmav1_sq", path, r.sigmav1_sq);
            r.sigmav2_sq = get_number(j, "sigmav2_sq", path, r.sigmav2_sq);
            return normalize(r);
        }
        ProblemParams p;
        p.a = get_number(j, "a", path, p.a);
        p.q = get_number(j, "q", path, p.q);
        p.r1 = get_number(j, "r1", path, p.r1);
        p.r2 = get_number(j, "r2", path, p.r2);
        p.sigma0_sq = get_number(j, "sigma0_sq", path, p.sigma0_sq);
        p.sigmav1_sq = get_number(j, "sigmav1_sq", path, p.sigmav1_sq);
        p.sigmav2_sq = get_number(j, "sigmav2_sq", path, p.sigmav2_sq);
        validate(p);
        return p;
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
}

StrategySpec strategy_from_json(const Json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw ConfigError(path + ".type", "expected a strategy type string");
    const auto type = j.at("type").get<std::string>();
    StrategySpec spec;
    if (type == "zero") {
        reject_unknown(j, {"type"}, path);
        spec = ZeroInput{};
    } else if (type == "linbb") {
        reject_unknown(j, {"type", "controller"}, path);
        spec = LinBB{static_cast<int>(get_integer(j, "controller", path, 1))};
    } else if (type == "linkal") {
        reject_unknown(j, {"type", "controller", "k"}, path);
        if (!j.contains("k")) throw ConfigError(path + ".k", "missing required field");
        spec = LinKal{static_cast<int>(get_integer(j, "controller", path, 1)), get_number(j, "k", path, 0.0)};
    } else if (type == "sig") {
        reject_unknown(j, {"type", "s", "d"}, path);
        if (!j.contains("d")) throw ConfigError(path + ".d", "missing required field");
        spec = Sig{static_cast<int>(get_integer(j, "s", path, 1)), get_number(j, "d", path, 1.0)};
    } else {
        throw ConfigError(path + ".type", "unknown strategy type '" + type + "'");
    }
    try {
        validate(spec);
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
    return spec;
}

SimConfig sim_config_from_json(const Json& j, const std::string& path) {
    reject_unknown(j, {"horizon", "burn_in", "trials", "seed", "workers", "allow_stable_a"}, path);
    SimConfig c;
    c.horizon = get_integer(j, "horizon", path, c.horizon);
    c.burn_in = get_integer(j, "burn_in", path, c.burn_in);
    c.trials = static_cast<int>(get_integer(j, "trials", path, c.trials));
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ConfigError(path + ".seed", "expected an unsigned integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.workers = static_cast<int>(get_integer(j, "workers", path, c.workers));
    if (j.contains("allow_stable_a")) {
        if (!j.at("allow_stable_a").is_boolean()) throw ConfigError(path + ".allow_stable_a", "expected a boolean");
        c.allow_stable_a = j.at("allow_stable_a").get<bool>();
    }
    try {
        validate(c);
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
    return c;
}

StrategySpec parse_strategy(const std::string& text) {
    if (text == "zero") return ZeroInput{};
    if (text == "linbb1") return LinBB{1};
    if (text == "linbb2") return LinBB{2};
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error&) {
        throw ConfigError("--strategy", "not a strategy label or JSON object");
    }
    return strategy_from_json(j, "--strategy");
}

std::vector<std::string> simulate_csv_columns() {
    return {"a", "q", "r1", "r2", "sv1sq", "sv2sq", "strategy", "s", "d", "k",
            "D", "P1", "P2", "weighted", "se_D", "se_P1", "se_P2"};
}

std::vector<std::string> simulate_csv_row(const ProblemParams& p, const StrategySpec& s, const SimResult& r) {
    std::string sv, dv, kv;
    if (const auto* sig = std::get_if<Sig>(&s)) {
        sv = std::to_string(sig->s);
        dv = format_double(sig->d);
    }
    if (const auto* kal = std::get_if<LinKal>(&s)) kv = format_double(kal->k);
    return {format_double(p.a),          format_double(p.q),         format_double(p.r1),
            format_double(p.r2),         format_double(p.sigmav1_sq), format_double(p.sigmav2_sq),
            strategy_label(s),           sv,                         dv,
            kv,                          format_double(r.avg_state_cost), format_double(r.avg_u1_power),
            format_double(r.avg_u2_power), format_double(r.weighted_cost), format_double(r.se_state),
            format_double(r.se_u1),      format_double(r.se_u2)};
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out;
}

}  // namespace lqgduet
