#pragma once

// Self-check run by `tandem_aoi verify`: closed forms, the absorbing-chain
// oracle and a short simulation against the recursions.

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "tandem_aoi/model.hpp"

namespace tandem_aoi::verify {

// Rates drawn uniformly from [lo, hi].
TandemConfig random_config(std::mt19937_64& rng, int servers, double lo, double hi);

struct OracleDeviation {
  double probability = 0.0;  // max |recursion - oracle| over reach probabilities
  double time = 0.0;         // same for conditional reach times
  std::size_t pairs = 0;
};

// Compares every live (from, target) pair of the recursion evaluated on
// `recursion` against the absorbing chain built from `oracle`. Preemptive
// pairs run over all targets; non-preemptive ones over delivery success.
OracleDeviation oracle_deviation(const TandemConfig& recursion, const TandemConfig& oracle,
                                 Policy policy);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Options {
  bool skip_sim = false;
  // Scales mu_1 by (1 + inject_fault) on the recursion side only.
  double inject_fault = 0.0;
  std::uint64_t seed = 20240;
};

std::vector<Check> run_checks(const Options& options);
void print_table(std::ostream& out, const std::vector<Check>& checks);

}  // namespace tandem_aoi::verify
