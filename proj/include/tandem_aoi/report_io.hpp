#pragma once

// Text renderings of analytic and simulated results, and scenario parsing.

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tandem_aoi/model.hpp"
#include "tandem_aoi/simulator.hpp"

namespace tandem_aoi::io {

using Json = nlohmann::ordered_json;

class ScenarioError : public Error {
 public:
  using Error::Error;
};

// Partial scenario; command-line flags fill or override the fields.
struct Scenario {
  std::optional<double> lambda;
  std::optional<Eigen::VectorXd> mu;
  std::optional<Policy> policy;
};

// Flat object {"lambda": x, "mu": [..], "policy": "preemptive"|"nonpreemptive"}.
Scenario parse_scenario(const Json& doc);
Scenario load_scenario(const std::string& path);

// "2,3.5,4" -> [2, 3.5, 4]
Eigen::VectorXd parse_rate_list(std::string_view text);

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

Json to_json(const AgeReport& report, const TandemConfig& config);
Json to_json(const sim::SimReport& report, const TandemConfig& config);

void write_csv(std::ostream& out, const AgeReport& report, const TandemConfig& config);
void write_csv(std::ostream& out, const sim::SimReport& report, const TandemConfig& config);

}  // namespace tandem_aoi::io
