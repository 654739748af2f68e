#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tandem_aoi/report_io.hpp"

namespace tandem_aoi::sweep {

struct SweepSpec {
  std::vector<double> lambdas;
  std::vector<Eigen::VectorXd> configs;  // service-rate vectors
  std::vector<Policy> policies{Policy::Preemptive, Policy::NonPreemptive};
  bool simulate = false;
  std::size_t deliveries = 100000;
  std::uint64_t seed = 1;
};

struct SweepRow {
  double lambda = 0.0;
  int servers = 0;
  Policy policy = Policy::Preemptive;
  double mean_service = 0.0;
  double mean_paoi = 0.0;
  std::optional<double> mean_aoi;
  std::optional<double> sim_mean_service;
  std::optional<double> sim_se;
};

// n points from `from` to `to` inclusive, evenly spaced in log scale.
std::vector<double> log_space(double from, double to, std::size_t n);

// Mean service time against lambda for three tandems:
//   N=3: mu = [1.5, 1.5, 1.5]
//   N=4: mu = [1.5, 1.5, 1.5, 5]
//   N=5: mu = [1.5, 1.5, 1.5, 1.5, 10]
// i.e. every server but the last runs at 1.5; lambda spans 25 log-spaced
// points in [0.1, 10].
SweepSpec fig3_preset();

// {"lambda": [..] | {"from": a, "to": b, "points": n, "spacing": "log"|"linear"},
//  "configs": [[mu..], ..], "policies": [..], "simulate": bool,
//  "deliveries": n, "seed": s}
SweepSpec parse_sweep_spec(const io::Json& doc);
SweepSpec load_sweep_spec(const std::string& path);

// Rows ordered by lambda ascending, then N, then policy (preemptive first).
// Simulation seeds are seed ^ row index. Points are evaluated on a worker
// pool; the returned order does not depend on scheduling.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

inline constexpr const char* kCsvHeader =
    "lambda,N,policy,mean_service,mean_paoi,mean_aoi,sim_mean_service,sim_se";

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
io::Json to_json(const std::vector<SweepRow>& rows);

}  // namespace tandem_aoi::sweep
