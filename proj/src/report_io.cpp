#include "tandem_aoi/report_io.hpp"

#include <charconv>
#include <fstream>
#include <vector>

namespace tandem_aoi::io {

namespace {

Json rates_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json distribution_json(const DeliveryDistribution& d) {
  return Json{{"index_base", d.index_base}, {"probs", rates_json(d.probs)}};
}

Json estimate_json(const sim::SimEstimate& e) {
  return Json{{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}};
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string optional_text(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

Scenario parse_scenario(const Json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
  Scenario s;
  if (auto it = doc.find("lambda"); it != doc.end()) {
    if (!it->is_number()) throw ScenarioError("scenario field 'lambda' must be a number");
    s.lambda = it->get<double>();
  }
  if (auto it = doc.find("mu"); it != doc.end()) {
    if (!it->is_array()) throw ScenarioError("scenario field 'mu' must be an array of numbers");
    Eigen::VectorXd mu(static_cast<Eigen::Index>(it->size()));
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_number()) throw ScenarioError("scenario field 'mu' must be an array of numbers");
      mu[static_cast<Eigen::Index>(i)] = (*it)[i].get<double>();
    }
    s.mu = std::move(mu);
  }
  if (auto it = doc.find("policy"); it != doc.end()) {
    if (!it->is_string()) throw ScenarioError("scenario field 'policy' must be a string");
    s.policy = parse_policy(it->get<std::string>());
    if (!s.policy) throw ScenarioError("unknown policy '" + it->get<std::string>() + "'");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path);
  try {
    return parse_scenario(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw ScenarioError("malformed scenario file " + path + ": " + e.what());
  }
}

Eigen::VectorXd parse_rate_list(std::string_view text) {
  std::vector<double> values;
  while (true) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || end != item.data() + item.size())
      throw ScenarioError("cannot parse rate '" + std::string(item) + "'");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

Json to_json(const AgeReport& report, const TandemConfig& config) {
  return Json{{"policy", std::string(to_string(report.policy))},
              {"lambda", config.lambda},
              {"mu", rates_json(config.mu)},
              {"mean_paoi", report.mean_paoi},
              {"mean_aoi", optional_json(report.mean_aoi)},
              {"mean_service", report.mean_service},
              {"y1", report.y1},
              {"y2", report.y2},
              {"z1", optional_json(report.z1)},
              {"delivery_distribution", distribution_json(report.delivery_dist)}};
}

Json to_json(const sim::SimReport& report, const TandemConfig& config) {
  return Json{{"policy", std::string(to_string(report.policy))},
              {"lambda", config.lambda},
              {"mu", rates_json(config.mu)},
              {"seed", report.seed},
              {"deliveries", report.horizon},
              {"warmup", report.warmup},
              {"batches", report.batches},
              {"paoi", estimate_json(report.paoi)},
              {"aoi_time_average", estimate_json(report.aoi_time_average)},
              {"mean_service", estimate_json(report.mean_service)},
              {"mean_interdeparture", estimate_json(report.mean_interdeparture)},
              {"cross_moment_yt", estimate_json(report.cross_moment_yt)},
              {"second_moment_y", estimate_json(report.second_moment_y)},
              {"second_moment_service", estimate_json(report.second_moment_service)},
              {"event_frequencies", distribution_json(report.event_frequencies)},
              {"counts",
               Json{{"generated", report.generated},
                    {"deliveries", report.deliveries},
                    {"drops_or_preemptions", report.drops_or_preemptions},
                    {"in_flight", report.in_flight},
                    {"out_of_order", report.out_of_order}}}};
}

void write_csv(std::ostream& out, const AgeReport& report, const TandemConfig& config) {
  out << "policy,lambda,N,mean_paoi,mean_aoi,mean_service,y1,y2,z1\n"
      << to_string(report.policy) << ',' << format_number(config.lambda) << ','
      << config.servers() << ',' << format_number(report.mean_paoi) << ','
      << optional_text(report.mean_aoi) << ',' << format_number(report.mean_service) << ','
      << format_number(report.y1) << ',' << format_number(report.y2) << ','
      << optional_text(report.z1) << '\n';
}

void write_csv(std::ostream& out, const sim::SimReport& report, const TandemConfig& config) {
  out << "policy,lambda,N,seed,metric,mean,std_error,n\n";
  const std::pair<const char*, const sim::SimEstimate*> rows[] = {
      {"paoi", &report.paoi},
      {"aoi_time_average", &report.aoi_time_average},
      {"mean_service", &report.mean_service},
      {"mean_interdeparture", &report.mean_interdeparture},
      {"cross_moment_yt", &report.cross_moment_yt},
      {"second_moment_y", &report.second_moment_y},
      {"second_moment_service", &report.second_moment_service}};
  for (const auto& [name, est] : rows) {
    out << to_string(report.policy) << ',' << format_number(config.lambda) << ','
        << config.servers() << ',' << report.seed << ',' << name << ','
        << format_number(est->mean) << ',' << format_number(est->std_error) << ',' << est->n
        << '\n';
  }
}

}  // namespace tandem_aoi::io
