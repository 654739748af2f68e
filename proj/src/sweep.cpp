#include "tandem_aoi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "tandem_aoi/nonpreemptive.hpp"
#include "tandem_aoi/preemptive.hpp"
#include "tandem_aoi/simulator.hpp"

namespace tandem_aoi::sweep {

namespace {

struct Point {
  double lambda;
  const Eigen::VectorXd* mu;
  Policy policy;
};

SweepRow evaluate(const Point& point, const SweepSpec& spec, std::size_t row) {
  const TandemConfig config{point.lambda, *point.mu};
  const AgeReport report = point.policy == Policy::Preemptive ? preemptive::analyze(config)
                                                              : nonpreemptive::analyze(config);
  SweepRow out;
  out.lambda = point.lambda;
  out.servers = config.servers();
  out.policy = point.policy;
  out.mean_service = report.mean_service;
  out.mean_paoi = report.mean_paoi;
  out.mean_aoi = report.mean_aoi;
  if (spec.simulate) {
    const auto sim = sim::simulate(config, point.policy, spec.deliveries,
                                   spec.seed ^ static_cast<std::uint64_t>(row));
    out.sim_mean_service = sim.mean_service.mean;
    out.sim_se = sim.mean_service.std_error;
  }
  return out;
}

double number_field(const io::Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw io::ScenarioError(std::string("sweep spec field '") + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

std::vector<double> log_space(double from, double to, std::size_t n) {
  if (n == 1) return {from};
  std::vector<double> out(n);
  const double lo = std::log10(from);
  const double step = (std::log10(to) - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) out[k] = std::pow(10.0, lo + step * static_cast<double>(k));
  out.front() = from;
  out.back() = to;
  return out;
}

SweepSpec fig3_preset() {
  SweepSpec spec;
  spec.lambdas = log_space(0.1, 10.0, 25);
  Eigen::VectorXd n3(3), n4(4), n5(5);
  n3 << 1.5, 1.5, 1.5;
  n4 << 1.5, 1.5, 1.5, 5.0;
  n5 << 1.5, 1.5, 1.5, 1.5, 10.0;
  spec.configs = {n3, n4, n5};
  return spec;
}

SweepSpec parse_sweep_spec(const io::Json& doc) {
  if (!doc.is_object()) throw io::ScenarioError("sweep spec must be a JSON object");
  SweepSpec spec;

  const auto lam = doc.find("lambda");
  if (lam == doc.end()) throw io::ScenarioError("sweep spec needs a 'lambda' field");
  if (lam->is_array()) {
    for (const auto& v : *lam) {
      if (!v.is_number()) throw io::ScenarioError("sweep spec 'lambda' entries must be numbers");
      spec.lambdas.push_back(v.get<double>());
    }
  } else if (lam->is_object()) {
    const double from = number_field(*lam, "from");
    const double to = number_field(*lam, "to");
    const double points = number_field(*lam, "points");
    if (points < 1 || points != std::floor(points))
      throw io::ScenarioError("sweep spec 'points' must be a positive integer");
    const std::string spacing = lam->value("spacing", std::string("log"));
    const auto n = static_cast<std::size_t>(points);
    if (spacing == "log") {
      if (!(from > 0 && to > 0)) throw io::ScenarioError("log spacing needs positive bounds");
      spec.lambdas = log_space(from, to, n);
    } else if (spacing == "linear") {
      for (std::size_t k = 0; k < n; ++k)
        spec.lambdas.push_back(n == 1 ? from : from + (to - from) * static_cast<double>(k) / static_cast<double>(n - 1));
    } else {
      throw io::ScenarioError("unknown lambda spacing '" + spacing + "'");
    }
  } else {
    throw io::ScenarioError("sweep spec 'lambda' must be an array or a range object");
  }
  if (spec.lambdas.empty()) throw io::ScenarioError("sweep spec has no lambda values");

  const auto cfgs = doc.find("configs");
  if (cfgs == doc.end() || !cfgs->is_array() || cfgs->empty())
    throw io::ScenarioError("sweep spec needs a non-empty 'configs' array");
  for (const auto& c : *cfgs) {
    const io::Scenario s = io::parse_scenario(io::Json{{"mu", c}});
    spec.configs.push_back(*s.mu);
  }

  if (auto it = doc.find("policies"); it != doc.end()) {
    if (!it->is_array() || it->empty())
      throw io::ScenarioError("sweep spec 'policies' must be a non-empty array");
    spec.policies.clear();
    for (const auto& p : *it) {
      const auto policy = p.is_string() ? parse_policy(p.get<std::string>()) : std::nullopt;
      if (!policy) throw io::ScenarioError("unknown policy in sweep spec: " + p.dump());
      spec.policies.push_back(*policy);
    }
  }
  if (auto it = doc.find("simulate"); it != doc.end()) {
    if (!it->is_boolean()) throw io::ScenarioError("sweep spec 'simulate' must be a boolean");
    spec.simulate = it->get<bool>();
  }
  if (auto it = doc.find("deliveries"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw io::ScenarioError("sweep spec 'deliveries' must be a positive integer");
    spec.deliveries = it->get<std::size_t>();
  }
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw io::ScenarioError("sweep spec 'seed' must be a non-negative integer");
    spec.seed = it->get<std::uint64_t>();
  }

  // Validate every scenario up front so a bad rate fails before any work.
  for (const auto& mu : spec.configs)
    for (double l : spec.lambdas) validate(TandemConfig{l, mu});
  if (spec.simulate && spec.deliveries < sim::kMinHorizon)
    throw HorizonTooSmall("sweep deliveries below minimum of " + std::to_string(sim::kMinHorizon));
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::ScenarioError("cannot open sweep spec " + path);
  try {
    return parse_sweep_spec(io::Json::parse(in));
  } catch (const io::Json::parse_error& e) {
    throw io::ScenarioError("malformed sweep spec " + path + ": " + e.what());
  }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  std::vector<double> lambdas = spec.lambdas;
  std::sort(lambdas.begin(), lambdas.end());
  std::vector<const Eigen::VectorXd*> configs;
  for (const auto& mu : spec.configs) configs.push_back(&mu);
  std::stable_sort(configs.begin(), configs.end(),
                   [](const auto* x, const auto* y) { return x->size() < y->size(); });
  std::vector<Policy> policies = spec.policies;
  std::stable_sort(policies.begin(), policies.end(), [](Policy x, Policy y) {
    return x == Policy::Preemptive && y == Policy::NonPreemptive;
  });

  std::vector<Point> points;
  for (double l : lambdas)
    for (const auto* mu : configs)
      for (Policy p : policies) points.push_back({l, mu, p});

  std::vector<SweepRow> rows(points.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) rows[k] = evaluate(points[k], spec, k);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? io::format_number(*v) : std::string(); };
  for (const SweepRow& r : rows) {
    out << io::format_number(r.lambda) << ',' << r.servers << ',' << to_string(r.policy) << ','
        << io::format_number(r.mean_service) << ',' << io::format_number(r.mean_paoi) << ','
        << opt(r.mean_aoi) << ',' << opt(r.sim_mean_service) << ',' << opt(r.sim_se) << '\n';
  }
}

io::Json to_json(const std::vector<SweepRow>& rows) {
  io::Json arr = io::Json::array();
  auto opt = [](const std::optional<double>& v) { return v ? io::Json(*v) : io::Json(nullptr); };
  for (const SweepRow& r : rows) {
    arr.push_back(io::Json{{"lambda", r.lambda},
                           {"N", r.servers},
                           {"policy", std::string(to_string(r.policy))},
                           {"mean_service", r.mean_service},
                           {"mean_paoi", r.mean_paoi},
                           {"mean_aoi", opt(r.mean_aoi)},
                           {"sim_mean_service", opt(r.sim_mean_service)},
                           {"sim_se", opt(r.sim_se)}});
  }
  return arr;
}

}  // namespace tandem_aoi::sweep
