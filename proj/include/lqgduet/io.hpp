#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "lqgduet/core.hpp"
#include "lqgduet/simulator.hpp"
#include "lqgduet/strategies.hpp"

namespace lqgduet {

using Json = nlohmann::json;

// Configuration error carrying the offending JSON field path.
class ConfigError : public InvalidArgument {
public:
    ConfigError(const std::string& path, const std::string& what)
        : InvalidArgument(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

Json to_json(const ProblemParams& p);
Json to_json(const RawParams& p);
Json to_json(const StrategySpec& s);
Json to_json(const SimConfig& c);
Json to_json(const SimResult& r);

// Accepts normalized fields, or raw fields (any of b1, b2, c1, c2, sigmaw_sq) which are normalized.
ProblemParams problem_from_json(const Json& j, const std::string& path = "$");
StrategySpec strategy_from_json(const Json& j, const std::string& path = "$");
SimConfig sim_config_from_json(const Json& j, const std::string& path = "$");

// A label (zero, linbb1, linbb2) or an inline JSON object.
StrategySpec parse_strategy(const std::string& text);

std::vector<std::string> simulate_csv_columns();
std::vector<std::string> simulate_csv_row(const ProblemParams& p, const StrategySpec& s, const SimResult& r);

std::string csv_line(const std::vector<std::string>& cells);
std::string format_double(double x);

}  // namespace lqgduet
