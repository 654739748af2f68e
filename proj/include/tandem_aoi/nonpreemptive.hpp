#pragma once

// Mean peak age for a tandem of bufferless exponential servers where an
// update is dropped when it finds the next server busy.
//
// State (a, b): the tagged packet is at server b and the nearest busy server
// ahead of it is a. The tagged packet is lost when it finishes while a == b+1.
// Once a reaches the monitor (N+1) nothing can block it any more.

#include <string>

#include "tandem_aoi/model.hpp"
#include "tandem_aoi/preemptive.hpp"

namespace tandem_aoi::nonpreemptive {

// Success probabilities P(a, b) and conditional delivery times T(a, b) over
// the whole (N+2)x(N+2) grid.
template <typename Scalar = double>
class SuccessTable {
 public:
  explicit SuccessTable(const BasicTandemConfig<Scalar>& config)
      : SuccessTable(extended_rates(config)) {}

  explicit SuccessTable(Vector<Scalar> rates) : rates_(std::move(rates)) {
    const int size = static_cast<int>(rates_.size());
    const int sink = size - 1;
    prob_ = Matrix<Scalar>::Zero(size, size);
    time_ = Matrix<Scalar>::Zero(size, size);

    // With nothing ahead the packet just walks through servers b..N.
    Scalar walk(0);
    for (int b = sink; b >= 0; --b) {
      if (b < sink) walk += Scalar(1) / rates_[b];
      prob_(sink, b) = Scalar(1);
      time_(sink, b) = walk;
    }

    for (int a = sink - 1; a >= 0; --a) {
      for (int b = a - 1; b >= 0; --b) {
        const Scalar total = rates_[a] + rates_[b];
        const Scalar p1 = rates_[a] / total * prob_(a + 1, b);
        const Scalar p2 = rates_[b] / total * prob_(a, b + 1);
        const Scalar prob = p1 + p2;
        prob_(a, b) = prob;
        if (prob != Scalar(0))
          time_(a, b) = Scalar(1) / total + p1 / prob * time_(a + 1, b) + p2 / prob * time_(a, b + 1);
      }
    }
  }

  Scalar probability(const StatePair& s) const {
    check(s);
    return prob_(s.a, s.b);
  }

  // Expected remaining time until the packet at server b reaches the monitor,
  // given that it does.
  Scalar time(const StatePair& s) const {
    check(s);
    return time_(s.a, s.b);
  }

 private:
  void check(const StatePair& s) const {
    const int top = static_cast<int>(rates_.size()) - 1;
    if (s.a < 0 || s.b < 0 || s.a > top || s.b > top)
      throw IndexOutOfRange("state " + to_string(s) + " outside 0.." + std::to_string(top));
  }

  Vector<Scalar> rates_;
  Matrix<Scalar> prob_;
  Matrix<Scalar> time_;
};

template <typename Scalar>
Scalar success_probability(const BasicTandemConfig<Scalar>& config, const StatePair& state) {
  return SuccessTable<Scalar>(config).probability(state);
}

template <typename Scalar>
Scalar reach_time(const BasicTandemConfig<Scalar>& config, const StatePair& state) {
  return SuccessTable<Scalar>(config).time(state);
}

// theta_i, i = 2..N+1: server i is the nearest busy server ahead when the
// tagged packet enters server 1. The monitor has rate zero, so the blocking
// factor lambda/(lambda + mu_{N+1}) is exactly one for i = N+1.
template <typename Scalar>
BasicDeliveryDistribution<Scalar> theta_distribution(const BasicTandemConfig<Scalar>& config,
                                                     const SuccessTable<Scalar>& table) {
  const Vector<Scalar> rates = extended_rates(config);
  const int n = config.servers();
  const Scalar lambda = rates[0];
  Vector<Scalar> eta(n);
  Scalar idle_prefix(1);
  for (int i = 2; i <= n + 1; ++i) {
    eta[i - 2] = idle_prefix * lambda / (lambda + rates[i]) * table.probability(StatePair{i, 1});
    if (i <= n) idle_prefix *= rates[i] / (rates[i] + lambda);
  }
  const Scalar total = eta.sum();
  if (!(total > Scalar(0)))
    throw DegenerateNormalization("theta weights sum to zero");
  return {eta / total, 2};
}

template <typename Scalar>
BasicDeliveryDistribution<Scalar> theta_distribution(const BasicTandemConfig<Scalar>& config) {
  return theta_distribution(config, SuccessTable<Scalar>(config));
}

template <typename Scalar>
BasicAgeReport<Scalar> analyze(const BasicTandemConfig<Scalar>& config) {
  const SuccessTable<Scalar> table(config);
  const int n = validate(config).servers();
  BasicAgeReport<Scalar> report;
  report.policy = Policy::NonPreemptive;
  report.delivery_dist = theta_distribution(config, table);

  Vector<Scalar> service(n);
  for (int i = 2; i <= n + 1; ++i) service[i - 2] = table.time(StatePair{i, 1});
  report.mean_service = service.dot(report.delivery_dist.probs);

  // Departures see the same busy/idle dynamics under both policies.
  const auto y = preemptive::y_moments(config);
  report.y1 = y.y1;
  report.y2 = y.y2;
  report.mean_paoi = report.y1 + report.mean_service;
  return report;
}

template <typename Scalar>
Scalar mean_service(const BasicTandemConfig<Scalar>& config) {
  return analyze(config).mean_service;
}

template <typename Scalar>
Scalar mean_paoi(const BasicTandemConfig<Scalar>& config) {
  return analyze(config).mean_paoi;
}

}  // namespace tandem_aoi::nonpreemptive
