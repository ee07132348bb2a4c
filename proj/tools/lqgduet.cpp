#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lqgduet/bounds_lower.hpp"
#include "lqgduet/bounds_upper.hpp"
#include "lqgduet/certifier.hpp"
#include "lqgduet/detmodel.hpp"
#include "lqgduet/io.hpp"
#include "lqgduet/simulator.hpp"
#include "lqgduet/sweep.hpp"

using namespace lqgduet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailed = 2;

struct ProblemFlags {
    std::optional<double> a, q, r1, r2, sv1sq, sv2sq, s0sq;
    std::string config;

    void attach(CLI::App* cmd) {
        cmd->add_option("--a", a, "system gain");
        cmd->add_option("--q", q, "state cost weight (default 1)");
        cmd->add_option("--r1", r1, "first input cost weight (default 0)");
        cmd->add_option("--r2", r2, "second input cost weight (default 0)");
        cmd->add_option("--sv1sq", sv1sq, "first observation noise variance (default 0)");
        cmd->add_option("--sv2sq", sv2sq, "second observation noise variance (default 0)");
        cmd->add_option("--s0sq", s0sq, "initial state variance (default 0)");
        cmd->add_option("--config", config, "JSON file with problem fields or a full run object");
    }

    Json file_json() const {
        if (config.empty()) return Json::object();
        std::ifstream in(config);
        if (!in) throw ConfigError("--config", "cannot open '" + config + "'");
        try {
            return Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
        }
    }

    ProblemParams resolve(const Json& file) const {
        if (!file.is_object()) throw ConfigError("$", "expected an object");
        if (file.contains("params"))
            for (const auto& [k, v] : file.items())
                if (k != "params" && k != "strategy" && k != "sim" && k != "result")
                    throw ConfigError("$." + k, "unknown field");
        Json j = file.contains("params") ? file.at("params") : file;
        if (!j.is_object()) throw ConfigError("$.params", "expected an object");
        auto put = [&](const char* key, const std::optional<double>& v) {
            if (v) j[key] = *v;
        };
        put("a", a);
        put("q", q);
        put("r1", r1);
        put("r2", r2);
        put("sigmav1_sq", sv1sq);
        put("sigmav2_sq", sv2sq);
        put("sigma0_sq", s0sq);
        return problem_from_json(j, file.contains("params") ? "$.params" : "$");
    }
};

struct OutputFlags {
    std::string output;
    bool json = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--output", output, "output path (default stdout)");
        cmd->add_flag("--json", json, "emit JSON instead of CSV");
    }

    void check() const {
        if (output.empty()) return;
        const auto parent = std::filesystem::path(output).parent_path();
        if (!parent.empty() && !std::filesystem::is_directory(parent))
            throw ConfigError("--output", "parent directory does not exist");
    }

    void write(const std::string& text) const {
        if (output.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(output);
        if (!out) throw ConfigError("--output", "cannot open '" + output + "'");
        out << text;
    }
};

std::string comment_block(const std::string& command, const Json& settings) {
    std::ostringstream os;
    os << "# lqgduet " << command << "\n";
    for (const auto& [k, v] : settings.items()) os << "# " << k << ": " << v.dump() << "\n";
    return os.str();
}

std::optional<std::uint64_t> seed_from_env() {
    const char* env = std::getenv("LQGDUET_SEED");
    if (!env || !*env) return std::nullopt;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("LQGDUET_SEED", "expected an unsigned integer");
    }
}

// simulate

struct SimulateCmd {
    ProblemFlags problem;
    OutputFlags out;
    std::string strategy;
    std::optional<long> horizon, burn_in;
    std::optional<int> trials, workers;
    std::optional<std::uint64_t> seed;
    bool allow_stable = false;

    void attach(CLI::App* cmd) {
        problem.attach(cmd);
        out.attach(cmd);
        cmd->add_option("--strategy", strategy, "zero | linbb1 | linbb2 | JSON strategy object");
        cmd->add_option("--horizon", horizon, "steps per trial (default 200000)");
        cmd->add_option("--burn-in", burn_in, "discarded leading steps (default 1000)");
        cmd->add_option("--trials", trials, "independent trials (default 32)");
        cmd->add_option("--seed", seed, "random seed (default 1)");
        cmd->add_option("--workers", workers, "worker threads, 0 for all cores (default 0)");
        cmd->add_flag("--allow-stable", allow_stable, "permit |a| < 1");
    }

    int operator()() const {
        out.check();
        const Json file = problem.file_json();
        const ProblemParams p = problem.resolve(file);
        StrategySpec spec;
        if (!strategy.empty()) spec = parse_strategy(strategy);
        else if (file.contains("strategy")) spec = strategy_from_json(file.at("strategy"), "$.strategy");
        else throw ConfigError("--strategy", "missing required option");
        SimConfig cfg = file.contains("sim") ? sim_config_from_json(file.at("sim"), "$.sim") : SimConfig{};
        if (horizon) cfg.horizon = *horizon;
        if (burn_in) cfg.burn_in = *burn_in;
        if (trials) cfg.trials = *trials;
        if (workers) cfg.workers = *workers;
        if (seed) cfg.seed = *seed;
        if (allow_stable) cfg.allow_stable_a = true;
        if (const auto env = seed_from_env()) cfg.seed = *env;
        try {
            validate(cfg);
        } catch (const InvalidArgument& e) {
            throw ConfigError("$.sim", e.what());
        }

        const SimResult r = run(p, spec, cfg);
        const Json run_json = {{"params", to_json(p)}, {"strategy", to_json(spec)}, {"sim", to_json(cfg)}};
        if (out.json) {
            Json j = run_json;
            j["result"] = to_json(r);
            out.write(j.dump(2) + "\n");
        } else {
            std::string text = comment_block("simulate", run_json);
            text += csv_line(simulate_csv_columns()) + "\n";
            text += csv_line(simulate_csv_row(p, spec, r)) + "\n";
            out.write(text);
        }
        if (r.unstable) {
            std::cerr << "unstable: state diverged in trial " << r.unstable_trial << " at step " << r.unstable_step
                      << "\n";
            return kExitFailed;
        }
        return kExitOk;
    }
};

// sweep

struct SweepCmd {
    SweepConfig cfg;
    OutputFlags out;
    bool no_lower = false;

    void attach(CLI::App* cmd) {
        out.attach(cmd);
        cmd->add_option("--a", cfg.a, "system gain")->capture_default_str();
        cmd->add_option("--sv1sq", cfg.sigmav1_sq, "first observation noise variance")->capture_default_str();
        cmd->add_option("--sv2sq", cfg.sigmav2_sq, "second observation noise variance (default a)");
        cmd->add_option("--q", cfg.q, "state cost weight")->capture_default_str();
        cmd->add_option("--l-min", cfg.l_min, "smallest exponent of r1 = a^l")->capture_default_str();
        cmd->add_option("--l-max", cfg.l_max, "largest exponent")->capture_default_str();
        cmd->add_option("--points", cfg.points, "grid size")->capture_default_str();
        cmd->add_flag("--no-lower", no_lower, "skip the converse evaluation");
    }

    int operator()() {
        out.check();
        cfg.with_lower = !no_lower;
        try {
            validate(cfg);
        } catch (const InvalidArgument& e) {
            throw ConfigError("sweep", e.what());
        }
        const auto rows = dof_sweep(cfg);
        const ProblemParams p = sweep_params(cfg);
        const Json settings = {{"params", to_json(p)},  {"l_min", cfg.l_min},
                               {"l_max", cfg.l_max},    {"points", cfg.points},
                               {"with_lower", cfg.with_lower}, {"label_changes", label_changes(rows)}};
        if (out.json) {
            Json j = settings;
            j["rows"] = Json::array();
            for (const auto& r : rows)
                j["rows"].push_back({{"l", r.l},         {"r1", r.r1},     {"linbb1", r.linbb1},
                                     {"linbb2", r.linbb2}, {"sig", r.sig},   {"upper", r.upper},
                                     {"argmin", r.argmin}, {"lower", cfg.with_lower ? Json(r.lower) : Json(nullptr)}});
            out.write(j.dump(2) + "\n");
            return kExitOk;
        }
        std::string text = comment_block("sweep", settings);
        text += "l,r1,linbb1,linbb2,sig,upper,argmin,lower\n";
        for (const auto& r : rows)
            text += csv_line({format_double(r.l), format_double(r.r1), format_double(r.linbb1), format_double(r.linbb2),
                              format_double(r.sig), format_double(r.upper), r.argmin, cfg.with_lower ? format_double(r.lower) : ""}) +
                    "\n";
        out.write(text);
        return kExitOk;
    }
};

// upper, lower

Json point_json(const TradeoffPoint& t) {
    auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(format_double(x)); };
    return {{"D", num(t.D)}, {"P1", num(t.P1)}, {"P2", num(t.P2)}};
}

struct UpperCmd {
    ProblemFlags problem;
    OutputFlags out;

    void attach(CLI::App* cmd) {
        problem.attach(cmd);
        out.attach(cmd);
    }

    int operator()() const {
        out.check();
        const ProblemParams p = problem.resolve(problem.file_json());
        const UpperResult r = optimize_upper(p);
        Json j = {{"params", to_json(p)},        {"regime", classify(p).label()}, {"cost", r.cost},
                  {"strategy", to_json(r.spec)}, {"point", point_json(r.point)}};
        if (r.design) j["design"] = {{"s", r.design->s}, {"d", r.design->d}, {"w1", r.design->w1}};
        if (out.json) {
            out.write(j.dump(2) + "\n");
        } else {
            std::string text = comment_block("upper", {{"params", to_json(p)}});
            text += "cost,strategy,D,P1,P2,s,d,w1\n";
            text += csv_line({format_double(r.cost), strategy_label(r.spec), format_double(r.point.D),
                              format_double(r.point.P1), format_double(r.point.P2),
                              r.design ? std::to_string(r.design->s) : "",
                              r.design ? format_double(r.design->d) : "",
                              r.design ? format_double(r.design->w1) : ""}) +
                    "\n";
            out.write(text);
        }
        return std::isfinite(r.cost) ? kExitOk : kExitFailed;
    }
};

struct LowerCmd {
    ProblemFlags problem;
    OutputFlags out;
    LowerConfig cfg;

    void attach(CLI::App* cmd) {
        problem.attach(cmd);
        out.attach(cmd);
        cmd->add_option("--max-evals", cfg.max_evals, "envelope evaluations per minimization")->capture_default_str();
        cmd->add_option("--rel-gap", cfg.rel_gap, "branch-and-bound stopping gap")->capture_default_str();
    }

    int operator()() const {
        out.check();
        const ProblemParams p = problem.resolve(problem.file_json());
        LowerBound lb(p, cfg);
        const LowerResult r = lb.minimize(p.q, p.r1, p.r2);
        if (out.json) {
            out.write(Json{{"params", to_json(p)},
                           {"regime", classify(p).label()},
                           {"cost", r.cost},
                           {"estimate", r.estimate},
                           {"P1", r.P1},
                           {"P2", r.P2},
                           {"envelope", envelope_name(r.which)},
                           {"evals", r.evals}}
                          .dump(2) +
                      "\n");
        } else {
            std::string text = comment_block("lower", {{"params", to_json(p)}, {"max_evals", cfg.max_evals}, {"rel_gap", cfg.rel_gap}});
            text += "cost,estimate,P1,P2,envelope,evals\n";
            text += csv_line({format_double(r.cost), format_double(r.estimate), format_double(r.P1), format_double(r.P2),
                              envelope_name(r.which), std::to_string(r.evals)}) +
                    "\n";
            out.write(text);
        }
        return kExitOk;
    }
};

// certify

std::vector<std::string> report_cells(const CertReport& r) {
    return {format_double(r.params.a),     format_double(r.params.q),          format_double(r.params.r1),
            format_double(r.params.r2),    format_double(r.params.sigmav1_sq), format_double(r.params.sigmav2_sq),
            r.regime.label(),              r.case_label,                       r.upper_strategy,
            format_double(r.upper),        format_double(r.lower),             format_double(r.ratio),
            format_double(r.cap),          r.pass ? "PASS" : "FAIL"};
}

const char* kReportHeader = "a,q,r1,r2,sv1sq,sv2sq,regime,case,upper_strategy,upper,lower,ratio,cap,result\n";

struct CertifyCmd {
    ProblemFlags problem;
    OutputFlags out;
    std::string regime;
    double cap = 0.0;

    void attach(CLI::App* cmd) {
        problem.attach(cmd);
        out.attach(cmd);
        cmd->add_option("--regime", regime, "certify the desk grid: strong | weak | all");
        cmd->add_option("--cap", cap, "ratio cap (default: regime cap)");
    }

    int operator()() const {
        out.check();
        if (cap < 0) throw ConfigError("--cap", "must be nonnegative");
        if (regime.empty()) {
            const ProblemParams p = problem.resolve(problem.file_json());
            if (!(std::fabs(p.a) >= 2.5)) throw ConfigError("$.a", "certification needs |a| >= 2.5");
            const CertReport r = certify_point(p, cap);
            if (out.json) {
                out.write(Json{{"params", to_json(p)},       {"regime", r.regime.label()}, {"case", r.case_label},
                               {"upper_strategy", r.upper_strategy}, {"upper", r.upper}, {"lower", r.lower},
                               {"ratio", r.ratio},           {"cap", r.cap},            {"pass", r.pass}}
                              .dump(2) +
                          "\n");
            } else {
                out.write(comment_block("certify", {{"params", to_json(p)}}) + kReportHeader + csv_line(report_cells(r)) +
                          "\n");
            }
            return r.pass ? kExitOk : kExitFailed;
        }
        GridScope scope;
        try {
            scope = parse_grid_scope(regime);
        } catch (const InvalidArgument& e) {
            throw ConfigError("--regime", e.what());
        }
        const double strong_cap = cap > 0 ? cap : kStrongCap;
        const double weak_cap = cap > 0 ? cap : kWeakCap;
        const GridSummary s = certify_grid(desk_grid(scope), strong_cap, weak_cap);
        const bool pass = s.failures == 0 && s.region_failures == 0;
        std::ostringstream summary;
        summary << (pass ? "PASS" : "FAIL") << ": " << s.reports.size() - s.failures << "/" << s.reports.size()
                << " grid points within cap, " << s.regions.size() - s.region_failures << "/" << s.regions.size()
                << " region checks hold, worst strong ratio " << format_double(s.worst_strong)
                << ", worst weak ratio " << format_double(s.worst_weak) << "\n";
        if (out.json) {
            Json j = {{"regime", regime}, {"strong_cap", strong_cap}, {"weak_cap", weak_cap}, {"pass", pass},
                      {"failures", s.failures}, {"region_failures", s.region_failures},
                      {"worst_strong", s.worst_strong}, {"worst_weak", s.worst_weak}};
            out.write(j.dump(2) + "\n");
        } else {
            std::string text = comment_block("certify", {{"regime", regime}, {"strong_cap", strong_cap}, {"weak_cap", weak_cap}});
            text += kReportHeader;
            for (const auto& r : s.reports) text += csv_line(report_cells(r)) + "\n";
            text += "# region,c,points,result\n";
            for (const auto& rc : s.regions)
                text += "# " + csv_line({rc.label, format_double(rc.c), std::to_string(rc.points), rc.pass ? "PASS" : "FAIL"}) + "\n";
            out.write(text);
        }
        std::cerr << summary.str();
        return pass ? kExitOk : kExitFailed;
    }
};

// detmodel

std::string bit_row(const BitWord& w) {
    std::string row;
    for (int i = w.hi() - 1; i >= w.lo(); --i) {
        if (i == -1) row += '|';
        row += w.at(i).empty() ? '.' : '#';
    }
    return row;
}

struct DetCmd {
    DetParams params;
    std::string strategy = "optimal";
    int steps = 8;
    bool json = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--aprime", params.a_prime, "level shift per step")->capture_default_str();
        cmd->add_option("--sv2-level", params.sigma_v2_level, "second observation noise level")->capture_default_str();
        cmd->add_option("--p1-level", params.p1_level, "first controller power level")->capture_default_str();
        cmd->add_option("--window-lo", params.window_lo, "lowest tracked level")->capture_default_str();
        cmd->add_option("--window-hi", params.window_hi, "one past the highest tracked level")->capture_default_str();
        cmd->add_option("--strategy", strategy, "optimal | linear | radner | witsen | witsen-passive")->capture_default_str();
        cmd->add_option("--steps", steps, "steps to run")->capture_default_str();
        cmd->add_flag("--json", json, "emit JSON");
    }

    int operator()() const {
        if (strategy == "radner" || strategy == "witsen" || strategy == "witsen-passive") {
            const Level l = strategy == "radner" ? det_radner() : det_witsen({}, strategy == "witsen");
            if (json) std::cout << Json{{"model", strategy}, {"final_level", level_string(l)}}.dump(2) << "\n";
            else std::cout << "final upper level: " << level_string(l) << "\n";
            return kExitOk;
        }
        DetStrategy st;
        if (strategy == "optimal") st = DetStrategy::Optimal;
        else if (strategy == "linear") st = DetStrategy::LinearShift;
        else throw ConfigError("--strategy", "unknown deterministic strategy '" + strategy + "'");
        if (steps < 1) throw ConfigError("--steps", "must be positive");
        try {
            validate(params);
        } catch (const InvalidArgument& e) {
            throw ConfigError("detmodel", e.what());
        }
        const DetRun r = det_run(params, st, steps);
        if (json) {
            Json levels = Json::array();
            for (const auto& l : r.levels) levels.push_back(level_string(l));
            std::cout << Json{{"strategy", det_strategy_name(st)}, {"a_prime", params.a_prime},
                              {"sigma_v2_level", params.sigma_v2_level}, {"p1_level", params.p1_level},
                              {"levels", levels}, {"steady", level_string(r.steady)},
                              {"settled_from", r.settled_from}, {"periodic_from", r.periodic_from}}
                             .dump(2)
                      << "\n";
            return kExitOk;
        }
        BitWord x = det_zero_state(params);
        std::cout << "# '#' random bit, '.' zero bit, '|' separates levels >= 0 from < 0\n";
        std::cout << "n=0  " << bit_row(x) << "  level " << level_string(x.upper_level()) << "\n";
        for (int n = 0; n < steps; ++n) {
            x = det_step(params, st, x, n);
            std::cout << "n=" << n + 1 << "  " << bit_row(x) << "  level " << level_string(x.upper_level()) << "\n";
        }
        std::cout << "steady upper level: " << level_string(r.steady) << "\n";
        return kExitOk;
    }
};

// prop1

struct Prop1Cmd {
    std::vector<double> a_values{1e4, 1e5, 1e6, 1e7, 1e8};
    bool log2 = false;
    OutputFlags out;

    void attach(CLI::App* cmd) {
        out.attach(cmd);
        cmd->add_option("--a", a_values, "comma-separated gains (each >= 1e4), sorted before tabulation")->delimiter(',');
        cmd->add_flag("--log2", log2, "use base-2 logarithm in the nonlinear bound");
    }

    int operator()() const {
        out.check();
        std::vector<double> sorted = a_values;
        std::sort(sorted.begin(), sorted.end());
        std::vector<Prop1Row> rows;
        try {
            rows = prop1_divergence(sorted, !log2);
        } catch (const InvalidArgument& e) {
            throw ConfigError("--a", e.what());
        }
        bool increasing = true;
        for (std::size_t i = 1; i < rows.size(); ++i) increasing = increasing && rows[i].log_ratio > rows[i - 1].log_ratio;
        if (out.json) {
            Json j = {{"increasing", increasing}, {"rows", Json::array()}};
            for (const auto& r : rows)
                j["rows"].push_back({{"a", r.a}, {"linear_lb", r.linear_lb}, {"nonlinear_ub", r.nonlinear_ub},
                                     {"ratio", r.ratio}, {"log_ratio", r.log_ratio}});
            out.write(j.dump(2) + "\n");
        } else {
            std::string text = comment_block("prop1", {{"log2", log2}, {"increasing", increasing}});
            text += "a,linear_lb,nonlinear_ub,ratio,log_ratio\n";
            for (const auto& r : rows)
                text += csv_line({format_double(r.a), format_double(r.linear_lb), format_double(r.nonlinear_ub),
                                  format_double(r.ratio), format_double(r.log_ratio)}) +
                        "\n";
            out.write(text);
        }
        return increasing ? kExitOk : kExitFailed;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized two-controller LQG laboratory"};
    app.require_subcommand(1);

    SimulateCmd simulate;
    SweepCmd sweep;
    UpperCmd upper;
    LowerCmd lower;
    CertifyCmd certify;
    DetCmd det;
    Prop1Cmd prop1;
    simulate.attach(app.add_subcommand("simulate", "Monte Carlo cost of one strategy"));
    sweep.attach(app.add_subcommand("sweep", "costs along r1 = a^l with r2 = 0"));
    upper.attach(app.add_subcommand("upper", "best analytic upper bound over the strategy set"));
    lower.attach(app.add_subcommand("lower", "converse lower bound on the weighted cost"));
    certify.attach(app.add_subcommand("certify", "ratio certification of one instance or the desk grid"));
    det.attach(app.add_subcommand("detmodel", "binary deterministic model level trace"));
    prop1.attach(app.add_subcommand("prop1", "linear versus nonlinear divergence table"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "simulate") return simulate();
        if (name == "sweep") return sweep();
        if (name == "upper") return upper();
        if (name == "lower") return lower();
        if (name == "certify") return certify();
        if (name == "detmodel") return det();
        return prop1();
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
}
