#include "tandem_aoi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "tandem_aoi/closed_form.hpp"
#include "tandem_aoi/ctmc_oracle.hpp"
#include "tandem_aoi/nonpreemptive.hpp"
#include "tandem_aoi/preemptive.hpp"
#include "tandem_aoi/simulator.hpp"

namespace tandem_aoi::verify {

namespace {

constexpr double kClosedFormTol = 1e-10;
constexpr double kOracleTol = 1e-9;
constexpr double kSimSigmas = 4.0;
// Conditional times are only compared where the target is reachable.
constexpr double kReachableFloor = 1e-12;

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

TandemConfig with_fault(TandemConfig config, double fault) {
  config.mu[0] *= 1.0 + fault;
  return config;
}

Check closed_form_check(const Options& options) {
  const double grid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  double worst = 0.0;
  int points = 0;
  for (double l : grid) {
    for (double m1 : grid) {
      for (double m2 : grid) {
        TandemConfig config{l, Eigen::Vector2d(m1, m2)};
        const TandemConfig faulty = with_fault(config, options.inject_fault);
        const auto pre = preemptive::analyze(faulty);
        const auto non = nonpreemptive::analyze(faulty);
        worst = std::max({worst,
                          std::abs(pre.mean_paoi - closed_form::paoi_preemptive_n2(l, m1, m2)),
                          std::abs(non.mean_paoi - closed_form::paoi_nonpreemptive_n2(l, m1, m2)),
                          std::abs(pre.y1 - closed_form::interdeparture_n2(l, m1, m2))});
        ++points;
      }
    }
  }
  return {"closed form (N=2 grid)", worst <= kClosedFormTol,
          std::to_string(points) + " points, max error " + sci(worst)};
}

Check oracle_check(const Options& options) {
  std::mt19937_64 rng(options.seed);
  OracleDeviation worst;
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k < 25; ++k) {
      const TandemConfig config = random_config(rng, n, 0.1, 10.0);
      const TandemConfig faulty = with_fault(config, options.inject_fault);
      for (Policy policy : {Policy::Preemptive, Policy::NonPreemptive}) {
        const OracleDeviation d = oracle_deviation(faulty, config, policy);
        worst.probability = std::max(worst.probability, d.probability);
        worst.time = std::max(worst.time, d.time);
        worst.pairs += d.pairs;
      }
    }
  }
  const bool ok = worst.probability <= kOracleTol && worst.time <= kOracleTol;
  return {"absorbing-chain oracle (N<=4)", ok,
          std::to_string(worst.pairs) + " pairs, max dP " + sci(worst.probability) + ", max dT " +
              sci(worst.time)};
}

Check simulation_check(const Options& options) {
  const TandemConfig config{1.0, Eigen::Vector2d(2.0, 3.0)};
  const TandemConfig faulty = with_fault(config, options.inject_fault);
  double worst = 0.0;
  for (Policy policy : {Policy::Preemptive, Policy::NonPreemptive}) {
    const AgeReport analytic = policy == Policy::Preemptive ? preemptive::analyze(faulty)
                                                            : nonpreemptive::analyze(faulty);
    const auto report = sim::simulate(config, policy, 200000, options.seed);
    worst = std::max({worst, std::abs(report.paoi.mean - analytic.mean_paoi) / report.paoi.std_error,
                      std::abs(report.mean_service.mean - analytic.mean_service) /
                          report.mean_service.std_error});
  }
  return {"short simulation (lambda=1, mu=2,3)", worst <= kSimSigmas,
          "max deviation " + sci(worst) + " standard errors"};
}

}  // namespace

TandemConfig random_config(std::mt19937_64& rng, int servers, double lo, double hi) {
  auto draw = [&] {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };
  TandemConfig config;
  config.lambda = draw();
  config.mu.resize(servers);
  for (int i = 0; i < servers; ++i) config.mu[i] = draw();
  return config;
}

OracleDeviation oracle_deviation(const TandemConfig& recursion, const TandemConfig& oracle,
                                 Policy policy) {
  const int n = validate(recursion).servers();
  OracleDeviation out;
  auto record = [&](double p_rec, double p_ref, double t_rec, const oracle::AbsorbingChain& chain,
                    const StatePair& from) {
    out.probability = std::max(out.probability, std::abs(p_rec - p_ref));
    if (p_ref > kReachableFloor) out.time = std::max(out.time, std::abs(t_rec - chain.reach_time(from)));
    ++out.pairs;
  };

  if (policy == Policy::Preemptive) {
    for (int ta = 1; ta <= n + 1; ++ta) {
      for (int tb = 0; tb < ta; ++tb) {
        const StatePair target{ta, tb};
        const preemptive::ReachTable<double> table(recursion, target);
        const oracle::AbsorbingChain chain(oracle, policy, target);
        for (int a = 1; a <= n + 1; ++a) {
          for (int b = 0; b < a; ++b) {
            const StatePair from{a, b};
            record(table.probability(from), chain.reach_probability(from), table.time(from), chain, from);
          }
        }
      }
    }
  } else {
    const nonpreemptive::SuccessTable<double> table(recursion);
    const oracle::AbsorbingChain chain(oracle, policy, oracle::SuccessSet{});
    for (int a = 1; a <= n + 1; ++a) {
      for (int b = 0; b < a; ++b) {
        const StatePair from{a, b};
        record(table.probability(from), chain.reach_probability(from), table.time(from), chain, from);
      }
    }
  }
  return out;
}

std::vector<Check> run_checks(const Options& options) {
  std::vector<Check> checks{closed_form_check(options), oracle_check(options)};
  if (!options.skip_sim) checks.push_back(simulation_check(options));
  return checks;
}

void print_table(std::ostream& out, const std::vector<Check>& checks) {
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << c.name
        << (c.passed ? "PASS  " : "FAIL  ") << c.detail << '\n';
  }
}

}  // namespace tandem_aoi::verify
